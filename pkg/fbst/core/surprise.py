"""
surprise.py
───────────
Fonction de surprise s(θ) = p̂(θ|x) / r(θ) et ensemble tangentiel
T̄(s*) = {θ : s(θ) > s*} (étapes 2 et 3 de l'algorithme).

Hypothèse nulle ponctuelle uniquement : s* = s(θ₀), sans recherche de supremum.
"""

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from fbst.core.reference import ReferenceFunction
from fbst.density.kde import DensityEstimate, kde_eval
from fbst.errors import DomainError, NumericalError, require

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SurpriseFunction:
    grid                 : np.ndarray
    values               : np.ndarray
    s_star               : float        # supremum sur l'ensemble nul = s(θ₀)
    null_value           : float        # θ₀
    s0_posterior_density : float        # p̂(θ₀|x)
    mode_surprise        : float        # max de s sur la grille
    relative_null_ratio  : float        # p̂(θ₀|x) / densité au mode, dans [0, 1]
    reference            : ReferenceFunction = field(default_factory=ReferenceFunction.flat, compare=False)


@dataclass(frozen=True)
class TangentialRegion:
    """
    member_mask[i] ⇔ s(grid[i]) > s*.
    interval_list : plages maximales de nœuds membres, en unités du paramètre.
    """
    member_mask  : np.ndarray
    interval_list: list[tuple[float, float]]

    @property
    def is_empty(self) -> bool:
        return not bool(self.member_mask.any())

    @property
    def is_full(self) -> bool:
        return bool(self.member_mask.all())


def surprise_fit(posterior: DensityEstimate, ref: ReferenceFunction, theta0: float) -> SurpriseFunction:
    """
    Tabule s(θ) sur la grille de la densité et l'évalue en θ₀.

    Raises:
        DomainError:    θ₀ non fini, ou table de référence ne couvrant pas la grille / θ₀.
        NumericalError: r(θ) nul (ou non fini) sur la grille ou en θ₀.
    """
    require(math.isfinite(theta0), f"valeur nulle θ₀ non finie : {theta0}")
    grid = posterior.grid

    if not ref.covers(float(grid[0]), float(grid[-1])):
        raise DomainError(
            f"la table de référence [{ref.table_grid[0]:g}, {ref.table_grid[-1]:g}] "
            f"ne couvre pas la grille [{grid[0]:g}, {grid[-1]:g}]"
        )
    if not ref.covers(theta0, theta0):
        raise DomainError(f"la table de référence ne couvre pas θ₀ = {theta0:g}")

    r_grid = np.asarray(ref(grid), dtype=float)
    if not (np.all(np.isfinite(r_grid)) and np.all(r_grid > 0)):
        i_bad = int(np.flatnonzero(~(np.isfinite(r_grid) & (r_grid > 0)))[0])
        raise NumericalError(
            f"la fonction de référence s'annule sur la grille (θ = {grid[i_bad]:g}) : surprise indéfinie"
        )

    r0 = float(ref(theta0))
    if not (math.isfinite(r0) and r0 > 0):
        raise NumericalError(f"la fonction de référence s'annule en θ₀ = {theta0:g} : surprise indéfinie")

    values = posterior.values / r_grid
    p0 = float(kde_eval(posterior, theta0))
    s_star = p0 / r0

    ratio = p0 / posterior.mode_density if posterior.mode_density > 0 else 0.0
    ratio = min(1.0, max(0.0, ratio))

    if p0 == 0.0:
        logger.warning("θ₀ = %g hors du support estimé : densité a posteriori nulle", theta0)

    logger.debug("Surprise : s*=%.6g p̂(θ₀)=%.6g ratio=%.6g référence=%s", s_star, p0, ratio, ref.describe())
    return SurpriseFunction(
        grid                 = grid,
        values               = values,
        s_star               = s_star,
        null_value           = float(theta0),
        s0_posterior_density = p0,
        mode_surprise        = float(values.max()),
        relative_null_ratio  = ratio,
        reference            = ref,
    )


def tangential_region(s: SurpriseFunction) -> TangentialRegion:
    """
    Nœuds dont la surprise dépasse strictement s*.
    Les égalités restent dans T (côté favorable à H₀).
    """
    mask = np.asarray(s.values > s.s_star)
    mask.setflags(write=False)

    bords = np.diff(np.concatenate(([0], mask.astype(np.int8), [0])))
    debuts = np.flatnonzero(bords == 1)
    fins = np.flatnonzero(bords == -1) - 1
    intervalles = [(float(s.grid[a]), float(s.grid[b])) for a, b in zip(debuts, fins)]

    logger.debug("Ensemble tangentiel : %d nœud(s), %d intervalle(s)", int(mask.sum()), len(intervalles))
    return TangentialRegion(member_mask=mask, interval_list=intervalles)
