import math

import numpy as np
import pytest
from scipy import special, stats

from fbst.errors import DomainError
from fbst.maths.special_math import (
    DensityFamily,
    chisq_cdf,
    chisq_pdf,
    chisq_quantile,
    density_eval,
    erf,
    log_gamma,
    reg_lower_incomplete_gamma,
)


@pytest.mark.parametrize("a", [0.1, 0.5, 1.0, 1.5, 3.0, 10.0, 50.0])
@pytest.mark.parametrize("x", [1e-3, 0.5, 1.0, 2.5, 7.0, 30.0, 120.0])
def test_incomplete_gamma_matches_scipy(a, x):
    assert reg_lower_incomplete_gamma(a, x) == pytest.approx(special.gammainc(a, x), rel=1e-10, abs=1e-15)


@pytest.mark.parametrize("x", [0.1, 1.0, 2.5, 10.0])
def test_incomplete_gamma_closed_forms(x):
    assert reg_lower_incomplete_gamma(1.0, x) == pytest.approx(1.0 - math.exp(-x), abs=1e-13)
    attendu = math.erf(math.sqrt(x)) - 2.0 * math.sqrt(x / math.pi) * math.exp(-x)
    assert reg_lower_incomplete_gamma(1.5, x) == pytest.approx(attendu, abs=1e-13)


def test_incomplete_gamma_bounds_and_monotonicity():
    assert reg_lower_incomplete_gamma(2.0, 0.0) == 0.0
    assert reg_lower_incomplete_gamma(2.0, math.inf) == 1.0
    valeurs = [reg_lower_incomplete_gamma(4.0, x) for x in np.linspace(0.0, 20.0, 200)]
    assert all(b >= a for a, b in zip(valeurs, valeurs[1:]))
    assert all(0.0 <= v <= 1.0 for v in valeurs)


@pytest.mark.parametrize("a, x", [(0.0, 1.0), (-1.0, 1.0), (1.0, -0.5), (math.nan, 1.0), (1.0, math.nan)])
def test_incomplete_gamma_domain(a, x):
    with pytest.raises(DomainError):
        reg_lower_incomplete_gamma(a, x)


@pytest.mark.parametrize("x", [0.01, 0.5, 1.0, 3.84, 10.0, 40.0])
def test_chisq_closed_forms(x):
    assert abs(chisq_cdf(x, 2) - (1.0 - math.exp(-x / 2.0))) < 1e-12
    assert abs(chisq_cdf(x, 1) - math.erf(math.sqrt(x / 2.0))) < 1e-12


def test_chisq_cdf_reference_value():
    assert chisq_cdf(5.0341, 3) == pytest.approx(0.8305998, abs=1e-4)


@pytest.mark.parametrize("df", [1, 2, 3, 7, 8, 50])
@pytest.mark.parametrize("p", [1e-4, 0.01, 0.3, 0.5, 0.8306, 0.95, 0.999999])
def test_chisq_quantile_roundtrip(df, p):
    q = chisq_quantile(p, df)
    assert abs(chisq_cdf(q, df) - p) < 1e-10
    assert q == pytest.approx(stats.chi2.ppf(p, df), rel=1e-8)


def test_chisq_quantile_edges():
    assert chisq_quantile(0.0, 3) == 0.0
    with pytest.raises(DomainError):
        chisq_quantile(1.0, 3)
    with pytest.raises(DomainError):
        chisq_quantile(-0.1, 3)
    with pytest.raises(DomainError):
        chisq_quantile(0.5, 0)


def test_chisq_cdf_domain():
    with pytest.raises(DomainError):
        chisq_cdf(-1.0, 3)
    with pytest.raises(DomainError):
        chisq_cdf(1.0, -2)


@pytest.mark.parametrize("df", [1, 2, 3, 8])
def test_chisq_pdf_matches_scipy(df):
    for x in (0.2, 1.0, 4.0, 15.0):
        assert chisq_pdf(x, df) == pytest.approx(stats.chi2.pdf(x, df), rel=1e-12)


def test_erf_and_log_gamma():
    for x in (-2.0, -0.3, 0.0, 0.7, 3.0):
        assert erf(x) == pytest.approx(math.erf(x), abs=1e-15)
    for a in (0.5, 1.0, 4.5, 100.0):
        assert log_gamma(a) == pytest.approx(math.lgamma(a), rel=1e-14)
    with pytest.raises(DomainError):
        log_gamma(0.0)


def test_density_families():
    cauchy = DensityFamily.cauchy(0.0, math.sqrt(2.0) / 2.0)
    assert cauchy.describe() == "cauchy:location=0,scale=0.707107"
    theta = np.array([-1.0, 0.0, 2.0])
    s = math.sqrt(2.0) / 2.0
    attendu = 1.0 / (math.pi * s * (1.0 + (theta / s) ** 2))
    assert np.allclose(density_eval(cauchy, theta), attendu, rtol=1e-12)

    assert density_eval(DensityFamily.flat(), 3.7) == 1.0
    assert density_eval(DensityFamily.normal(1.0, 2.0), 1.0) == pytest.approx(1.0 / (2.0 * math.sqrt(2 * math.pi)))
    assert density_eval(DensityFamily.student_t(0.0, 1.0, 3.0), 0.5) == pytest.approx(stats.t.pdf(0.5, 3.0))


@pytest.mark.parametrize("family, params", [
    ("normal", {"mean": 0.0, "sd": 0.0}),
    ("normal", {"mean": 0.0}),
    ("cauchy", {"location": 0.0, "scale": -1.0}),
    ("student_t", {"location": 0.0, "scale": 1.0, "df": math.inf}),
    ("lognormal", {}),
])
def test_density_family_validation(family, params):
    with pytest.raises(DomainError):
        DensityFamily(family, params)
