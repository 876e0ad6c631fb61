import math

import numpy as np
import pytest
from scipy import stats

from fbst.core.evalue import (
    bayesian_significance,
    check_dimensions,
    evalue_grid,
    evalue_mc,
    pvalue_evalue,
    standardized_evalue,
)
from fbst.core.reference import ReferenceFunction, parse_reference
from fbst.core.surprise import surprise_fit, tangential_region
from fbst.density.kde import DensityEstimate
from fbst.errors import DimensionError, DomainError, NumericalError
from fbst.maths.special_math import DensityFamily, chisq_cdf, chisq_quantile


@pytest.mark.parametrize("ev, k, h, sev", [
    (0.8305998, 3, 2, 0.0248695),
    (0.9032063, 3, 2, 0.01189972),
    (0.9859827, 3, 2, 0.001123303),
    (0.9758885, 8, 7, 2.672151e-05),
])
def test_standardized_evalue_reference_values(ev, k, h, sev):
    resultat = standardized_evalue(ev, k, h)
    assert resultat.sev == pytest.approx(sev, rel=1e-3)
    assert resultat.sev_against + resultat.sev == pytest.approx(1.0, abs=1e-15)


def test_standardized_evalue_edges():
    assert tuple(standardized_evalue(0.0, 3, 2)) == (0.0, 1.0)
    assert tuple(standardized_evalue(1.0, 3, 2)) == (1.0, 0.0)
    with pytest.raises(DomainError):
        standardized_evalue(1.2, 3, 2)


@pytest.mark.parametrize("k, h", [(1, 0), (3, 2), (4, 1), (8, 7)])
def test_standardized_evalue_decreasing_on_fine_grid(k, h):
    grille = np.arange(1, 1000) / 1000.0
    sev = np.array([standardized_evalue(ev, k, h).sev for ev in grille])
    assert np.all(np.diff(sev) <= 0.0)
    assert np.all((sev >= 0.0) & (sev <= 1.0))


def test_pvalue_reference_value():
    q = chisq_quantile(1.0 - 0.1461029, 1)
    assert pvalue_evalue(math.exp(-q / 2.0), 3, 2) == pytest.approx(0.1461029, abs=1e-9)


def test_pvalue_edges():
    assert pvalue_evalue(1.0, 3, 2) == 1.0
    assert pvalue_evalue(1.0 + 1e-13, 3, 2) == 1.0
    with pytest.raises(DomainError):
        pvalue_evalue(0.0, 3, 2)
    with pytest.raises(DomainError):
        pvalue_evalue(1.5, 3, 2)
    with pytest.raises(DimensionError):
        pvalue_evalue(0.5, 2, 2)


@pytest.mark.parametrize("k, h", [(0, 0), (2, 2), (2, 3), (3, -1), (2.0, 1), (True, 0)])
def test_check_dimensions(k, h):
    with pytest.raises(DimensionError):
        check_dimensions(k, h)


def test_bayesian_significance():
    assert bayesian_significance(0.0, 0.0, 1) == 0.0
    assert bayesian_significance([1.0, 0.0], [0.0, 0.0], 2) == pytest.approx(1.0 - math.exp(-0.5), abs=1e-13)
    assert bayesian_significance([1.0, 2.0, 0.0], [0.0, 0.0, 0.1341], 3) == pytest.approx(
        chisq_cdf(5.01798281, 3), abs=1e-12)
    with pytest.raises(DimensionError):
        bayesian_significance([1.0, 2.0], [0.0], 2)


# ══════════════════════════════════════════════════════════════════════
# Surprise et ensemble tangentiel
# ══════════════════════════════════════════════════════════════════════

def _normal_density(mu=0.0, sigma=1.0, grid_size=4096):
    return DensityEstimate.from_function(lambda t: stats.norm.pdf(t, mu, sigma),
                                         mu - 8 * sigma, mu + 8 * sigma, grid_size)


def _bimodal_density():
    def pdf(t):
        return 0.6 * stats.norm.pdf(t, -2.0, 0.6) + 0.4 * stats.norm.pdf(t, 2.0, 0.8)
    return DensityEstimate.from_function(pdf, -7.0, 7.0, 2048)


def test_tangential_region_flat_normal():
    post = _normal_density()
    s = surprise_fit(post, ReferenceFunction.flat(), 1.0)
    region = tangential_region(s)
    assert len(region.interval_list) == 1
    gauche, droite = region.interval_list[0]
    assert gauche == pytest.approx(-1.0, abs=0.01)
    assert droite == pytest.approx(1.0, abs=0.01)
    assert evalue_grid(post, region) == pytest.approx(2 * stats.norm.cdf(1.0) - 1, abs=2e-3)


def test_tangential_region_bimodal_two_intervals():
    post = _bimodal_density()
    s = surprise_fit(post, ReferenceFunction.flat(), 2.5)
    region = tangential_region(s)
    assert len(region.interval_list) == 2
    assert region.interval_list[0][1] < 0 < region.interval_list[1][0]


def test_null_at_mode_gives_empty_region():
    post = _normal_density(0.4, 1.0)
    s = surprise_fit(post, ReferenceFunction.flat(), post.mode_location)
    region = tangential_region(s)
    assert region.is_empty
    assert evalue_grid(post, region) == 0.0
    assert s.relative_null_ratio == 1.0


def test_null_outside_support_gives_full_region():
    post = DensityEstimate.from_function(lambda t: stats.norm.pdf(t) + 1e-6, -5.0, 5.0)
    s = surprise_fit(post, ReferenceFunction.flat(), 50.0)
    region = tangential_region(s)
    assert s.s_star == 0.0
    assert region.is_full
    assert evalue_grid(post, region) == 1.0


def test_prior_reference_changes_surprise():
    post = _normal_density(0.0, 0.3)
    ref = ReferenceFunction.parametric(DensityFamily.normal(0.0, 1.0))
    s = surprise_fit(post, ref, 0.0)
    assert s.s_star == pytest.approx(stats.norm.pdf(0, 0, 0.3) / stats.norm.pdf(0), rel=1e-3)
    assert np.allclose(s.values, post.values / stats.norm.pdf(post.grid))


def test_reference_vanishing_on_grid():
    post = _normal_density()
    ref = parse_reference("normal:mean=100,sd=0.1")
    with pytest.raises(NumericalError):
        surprise_fit(post, ref, 0.0)


def test_table_reference_must_cover_grid():
    post = _normal_density()
    ref = ReferenceFunction.tabulated([-1.0, 0.0, 1.0], [1.0, 2.0, 1.0], source="mini")
    with pytest.raises(DomainError):
        surprise_fit(post, ref, 0.0)


def test_evalue_mc_strict_inequality():
    post = _normal_density()
    s = surprise_fit(post, ReferenceFunction.flat(), 1.0)
    # Tirages exactement en θ₀ : surprise = s*, donc hors de l'ensemble
    tirages = np.array([1.0] * 20 + [0.0] * 20)
    assert evalue_mc(tirages, s) == 0.5
    assert evalue_mc(np.array([100.0] * 40), s) == 0.0


def test_evalue_bounds_on_random_shapes():
    rng = np.random.default_rng(5)
    for _ in range(20):
        mu, sigma = rng.normal(0, 2), rng.uniform(0.2, 3)
        post = _normal_density(mu, sigma, 512)
        theta0 = rng.normal(mu, 2 * sigma)
        ev = evalue_grid(post, tangential_region(surprise_fit(post, ReferenceFunction.flat(), theta0)))
        assert 0.0 <= ev <= 1.0
