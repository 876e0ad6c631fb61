"""
evalue.py
─────────
Quantités de preuve du test (étapes 4 et 5) :

    evalue_grid            ēv(H₀) par quadrature trapèze sur l'ensemble tangentiel
    evalue_mc              ēv(H₀) par comptage des tirages de surprise > s*
    pvalue_evalue          pv₀ = 1 − F_{k−h}(−2·ln ratio)
    standardized_evalue    s̄ev = F_{k−h}(F_k⁻¹(ēv)), sev = 1 − s̄ev
    bayesian_significance  ev₀ = F_k(‖m₀ − M₀‖²)
"""

import logging
import math
from typing import NamedTuple, Sequence, Union

import numpy as np
from scipy.integrate import trapezoid

from fbst.core.surprise import SurpriseFunction, TangentialRegion
from fbst.density.kde import DensityEstimate, PosteriorSample
from fbst.errors import DimensionError, require
from fbst.maths.special_math import chisq_cdf, chisq_quantile

logger = logging.getLogger(__name__)

# Tolérance sur un ratio légèrement supérieur à 1 (arrondi)
_RATIO_SLACK = 1e-12


class StandardizedEvalue(NamedTuple):
    sev_against: float
    sev        : float


def check_dimensions(k: int, h: int) -> None:
    """k entier ≥ 1, h entier ≥ 0, h < k."""
    require(isinstance(k, (int, np.integer)) and not isinstance(k, bool) and k >= 1,
            f"dimension de Θ invalide : {k!r} (entier ≥ 1 attendu)", DimensionError)
    require(isinstance(h, (int, np.integer)) and not isinstance(h, bool) and h >= 0,
            f"dimension de l'ensemble nul invalide : {h!r} (entier ≥ 0 attendu)", DimensionError)
    require(h < k, f"dimension de l'ensemble nul ({h}) ≥ dimension de Θ ({k})", DimensionError)


def _clamp01(x: float) -> float:
    return min(1.0, max(0.0, float(x)))


# ══════════════════════════════════════════════════════════════════════
# E-VALUE
# ══════════════════════════════════════════════════════════════════════

def evalue_grid(posterior: DensityEstimate, region: TangentialRegion) -> float:
    """
    Masse a posteriori de l'ensemble tangentiel, auto-normalisée
    par la masse totale de la grille.
    """
    mask = region.member_mask
    require(mask.shape == posterior.values.shape, "ensemble tangentiel et grille de tailles différentes")

    total = float(trapezoid(posterior.values, posterior.grid))
    if total <= 0.0:
        return 0.0
    tangentiel = float(trapezoid(np.where(mask, posterior.values, 0.0), posterior.grid))
    return _clamp01(tangentiel / total)


def evalue_mc(sample: Union[PosteriorSample, np.ndarray], s: SurpriseFunction) -> float:
    """Part des tirages dont la surprise interpolée dépasse strictement s*."""
    draws = sample.draws if isinstance(sample, PosteriorSample) else np.asarray(sample, dtype=float)
    require(draws.size > 0, "aucun tirage")
    surprise = np.interp(draws, s.grid, s.values, left=0.0, right=0.0)
    return float(np.count_nonzero(surprise > s.s_star)) / draws.size


# ══════════════════════════════════════════════════════════════════════
# ASYMPTOTIQUE χ²
# ══════════════════════════════════════════════════════════════════════

def pvalue_evalue(relative_null_ratio: float, k: int, h: int) -> float:
    """
    pv₀ = 1 − F_{k−h}(−2·λ), λ = ln(p̂(θ₀|x) / p̂(M|x)).

    Raises:
        DomainError:    ratio ≤ 0 ou > 1.
        DimensionError: h ≥ k.
    """
    check_dimensions(k, h)
    require(not math.isnan(relative_null_ratio), "ratio NaN")
    require(relative_null_ratio > 0.0, f"ratio non positif : {relative_null_ratio}")
    require(relative_null_ratio <= 1.0 + _RATIO_SLACK, f"ratio supérieur à 1 : {relative_null_ratio}")

    ratio = min(1.0, relative_null_ratio)
    statistique = max(0.0, -2.0 * math.log(ratio))
    return _clamp01(1.0 - chisq_cdf(statistique, k - h))


def standardized_evalue(ev_against: float, k: int, h: int) -> StandardizedEvalue:
    """
    e-value standardisée. Aux bords ēv ∈ {0, 1} la valeur limite est renvoyée.
    """
    check_dimensions(k, h)
    require(not math.isnan(ev_against) and 0.0 <= ev_against <= 1.0,
            f"e-value hors de [0, 1] : {ev_against}")

    if ev_against == 0.0:
        return StandardizedEvalue(0.0, 1.0)
    if ev_against == 1.0:
        return StandardizedEvalue(1.0, 0.0)

    quantile = chisq_quantile(ev_against, k)
    sev_against = _clamp01(chisq_cdf(quantile, k - h))
    return StandardizedEvalue(sev_against, 1.0 - sev_against)


def bayesian_significance(m0: Union[float, Sequence[float]],
                          M0: Union[float, Sequence[float]],
                          k: int) -> float:
    """F_k de la distance euclidienne au carré entre m₀ et M₀."""
    require(isinstance(k, (int, np.integer)) and k >= 1, f"k invalide : {k!r}", DimensionError)
    a = np.atleast_1d(np.asarray(m0, dtype=float))
    b = np.atleast_1d(np.asarray(M0, dtype=float))
    require(a.shape == b.shape, f"dimensions différentes : {a.shape} vs {b.shape}", DimensionError)
    distance2 = float(np.sum((a - b) ** 2))
    return chisq_cdf(distance2, k)
