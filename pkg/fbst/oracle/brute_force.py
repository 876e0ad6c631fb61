"""
brute_force.py
──────────────
e-value par somme de Riemann directe (points milieux), sans KDE ni
quadrature partagée avec fbst.core — contrôle indépendant.
"""

import logging
from typing import Callable, Optional

import numpy as np

from fbst.errors import require

logger = logging.getLogger(__name__)

MIN_STEPS = 100_000
_CHUNK    = 1_000_000


def brute_force_evalue(density_fn: Callable[[np.ndarray], np.ndarray],
                       ref_fn: Optional[Callable[[np.ndarray], np.ndarray]],
                       theta0: float,
                       lo: float,
                       hi: float,
                       steps: int = 200_000) -> float:
    """
    ∫ densité sur {θ : densité(θ)/ref(θ) > densité(θ₀)/ref(θ₀)}, normalisée
    par la masse totale de [lo, hi]. ref_fn None ⇒ référence plate.

    Les fonctions doivent accepter des tableaux numpy.
    """
    require(steps >= MIN_STEPS, f"au moins {MIN_STEPS} pas requis (reçu {steps})")
    require(lo < hi, f"intervalle invalide [{lo}, {hi}]")

    if ref_fn is None:
        ref_fn = np.ones_like

    s0 = float(np.asarray(density_fn(np.array([theta0])))[0] / np.asarray(ref_fn(np.array([theta0])))[0])
    largeur = (hi - lo) / steps

    total = 0.0
    dedans = 0.0
    for debut in range(0, steps, _CHUNK):
        milieux = lo + (np.arange(debut, min(steps, debut + _CHUNK)) + 0.5) * largeur
        densite = np.asarray(density_fn(milieux), dtype=float)
        surprise = densite / np.asarray(ref_fn(milieux), dtype=float)
        total += float(densite.sum())
        dedans += float(densite[surprise > s0].sum())

    logger.debug("Brute force : %d pas, masse %.8f", steps, total * largeur)
    return dedans / total if total > 0 else 0.0
