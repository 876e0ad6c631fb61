"""
analytic.py
───────────
Postérieures analytiques et e-values exactes servant de vérité terrain.

Avec une référence plate et une postérieure N(μ, σ), l'ensemble tangentiel
est {θ : |θ − μ| < |θ₀ − μ|}, d'où ēv = 2·Φ(|θ₀ − μ| / σ) − 1.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from scipy import stats

from fbst.density.kde import PosteriorSample
from fbst.errors import require


@dataclass(frozen=True)
class AnalyticPosterior:
    mu    : float
    sigma : float
    family: str = "normal"

    def __post_init__(self):
        require(self.family == "normal", f"famille analytique non supportée : '{self.family}'")
        require(math.isfinite(self.mu), "μ non fini")
        require(math.isfinite(self.sigma) and self.sigma > 0, f"σ doit être > 0 (reçu {self.sigma})")

    def pdf(self, theta: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        return stats.norm.pdf(theta, loc=self.mu, scale=self.sigma)

    def sample(self, n: int, seed: Optional[int] = None, label: str = "theta") -> PosteriorSample:
        """Tirages exacts de la postérieure."""
        rng = np.random.default_rng(seed)
        return PosteriorSample(rng.normal(self.mu, self.sigma, size=int(n)), label)


def analytic_evalue_flat(post: AnalyticPosterior, theta0: float) -> float:
    """ēv(H₀) exacte pour une référence plate."""
    z = abs(theta0 - post.mu) / post.sigma
    return max(0.0, 2.0 * float(stats.norm.cdf(z)) - 1.0)
