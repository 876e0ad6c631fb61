"""
kde.py
======
Estimation de la densité a posteriori p(θ|x) par noyau gaussien,
tabulée sur une grille régulière (étape 1 de l'algorithme).

    - largeur de bande : règle de Silverman par défaut, surchargeable
    - grille : 1024 points sur [min − 3h, max + 3h]
    - évaluation hors nœuds : interpolation linéaire, 0 hors de la grille

Pour les gros échantillons (n × grille > DIRECT_KDE_LIMIT) la somme des
noyaux est remplacée par un binning linéaire suivi d'une convolution FFT.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import stats
from scipy.integrate import trapezoid
from scipy.signal import fftconvolve

from fbst import config
from fbst.errors import InputError, NumericalError, require

logger = logging.getLogger(__name__)

# Nombre de largeurs de bande couvertes par le noyau discrétisé (chemin FFT)
_KERNEL_REACH = 8.0

# Taille maximale d'un bloc (nœuds × tirages) pour la somme directe
_DIRECT_BLOCK = 4_000_000


@dataclass(frozen=True)
class PosteriorSample:
    """
    Tirages a posteriori d'un paramètre d'intérêt scalaire.

    draws : vecteur de tirages finis (unités du paramètre)
    label : nom du paramètre (ex. "delta")
    """
    draws: np.ndarray
    label: str

    def __post_init__(self):
        draws = np.asarray(self.draws, dtype=float).ravel()
        require(bool(self.label and str(self.label).strip()), "label de l'échantillon vide", InputError)
        require(bool(np.all(np.isfinite(draws))), f"'{self.label}' : tirages non finis", InputError)
        require(draws.size >= config.MIN_DRAWS,
                f"'{self.label}' : {draws.size} tirage(s), minimum {config.MIN_DRAWS}", InputError)
        draws.setflags(write=False)
        object.__setattr__(self, "draws", draws)

    @property
    def n(self) -> int:
        return int(self.draws.size)


@dataclass(frozen=True)
class DensityEstimate:
    """
    Densité tabulée p̂(θ|x) sur une grille strictement croissante.

    bandwidth vaut 0 pour une densité tabulée depuis une forme close.
    """
    grid         : np.ndarray
    values       : np.ndarray
    bandwidth    : float
    mode_location: float
    mode_density : float
    sample_size  : int = 0

    def __post_init__(self):
        for nom in ("grid", "values"):
            arr = np.asarray(getattr(self, nom), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, nom, arr)

    @property
    def grid_size(self) -> int:
        return int(self.grid.size)

    def mass(self) -> float:
        """Intégrale trapèze des valeurs sur la grille."""
        return float(trapezoid(self.values, self.grid))

    @classmethod
    def from_values(cls, grid: np.ndarray, values: np.ndarray,
                    bandwidth: float, sample_size: int = 0) -> "DensityEstimate":
        """Construit l'estimation et renseigne le mode depuis le maximum de la grille."""
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        require(grid.ndim == 1 and grid.size == values.size and grid.size >= 2,
                "grille et valeurs de tailles incohérentes")
        require(bool(np.all(np.diff(grid) > 0)), "grille non strictement croissante")
        require(bool(np.all(values >= 0)), "densité négative sur la grille")
        i_mode = int(np.argmax(values))
        return cls(
            grid          = grid,
            values        = values,
            bandwidth     = float(bandwidth),
            mode_location = float(grid[i_mode]),
            mode_density  = float(values[i_mode]),
            sample_size   = int(sample_size),
        )

    @classmethod
    def from_function(cls, density_fn: Callable[[np.ndarray], np.ndarray],
                      lo: float, hi: float,
                      grid_size: int = config.DEFAULT_GRID_SIZE) -> "DensityEstimate":
        """
        Tabule une densité a posteriori connue sous forme close.

        La fonction doit accepter un tableau numpy. Le résultat est
        renormalisé à une masse trapèze unité.
        """
        require(math.isfinite(lo) and math.isfinite(hi) and lo < hi,
                f"intervalle de tabulation invalide [{lo}, {hi}]")
        require(grid_size >= config.MIN_GRID_SIZE,
                f"grid_size {grid_size} < {config.MIN_GRID_SIZE}")
        grid = np.linspace(lo, hi, grid_size)
        values = np.asarray(density_fn(grid), dtype=float)
        require(values.shape == grid.shape, "la densité doit renvoyer un tableau de même taille que la grille")
        require(bool(np.all(np.isfinite(values))) and bool(np.all(values >= 0)),
                "densité non finie ou négative", NumericalError)
        masse = float(trapezoid(values, grid))
        require(masse > 0, "densité de masse nulle sur l'intervalle", NumericalError)
        return cls.from_values(grid, values / masse, bandwidth=0.0)


DrawsLike = Union[PosteriorSample, np.ndarray, list]


def _as_draws(sample: DrawsLike) -> np.ndarray:
    """Accepte un PosteriorSample ou un tableau brut (n ≥ 2, valeurs finies)."""
    if isinstance(sample, PosteriorSample):
        return sample.draws
    x = np.asarray(sample, dtype=float).ravel()
    require(x.size >= 2, f"au moins 2 tirages requis ({x.size} reçu(s))")
    require(bool(np.all(np.isfinite(x))), "tirages non finis", InputError)
    return x


# ══════════════════════════════════════════════════════════════════════
# LARGEUR DE BANDE
# ══════════════════════════════════════════════════════════════════════

def silverman_bandwidth(sample: DrawsLike) -> float:
    """
    Règle de Silverman : h = 0.9 · min(sd, IQR/1.34) · n^(−1/5).
    Si l'IQR est nul, seul l'écart-type est utilisé.

    Raises:
        NumericalError: si tous les tirages sont identiques.
    """
    x = _as_draws(sample)
    n = x.size

    sd = float(np.std(x, ddof=1))
    if sd == 0.0 or not math.isfinite(sd):
        raise NumericalError("dispersion nulle : tous les tirages sont identiques")

    q75, q25 = np.percentile(x, [75, 25], method="inverted_cdf")
    iqr = float(q75 - q25)
    dispersion = min(sd, iqr / 1.34) if iqr > 0 else sd

    h = 0.9 * dispersion * n ** (-0.2)
    logger.debug("Silverman : n=%d sd=%.6g IQR=%.6g → h=%.6g", n, sd, iqr, h)
    return h


# ══════════════════════════════════════════════════════════════════════
# AJUSTEMENT ET ÉVALUATION
# ══════════════════════════════════════════════════════════════════════

def kde_fit(sample: DrawsLike,
            bandwidth: Optional[float] = None,
            grid_size: int = config.DEFAULT_GRID_SIZE) -> DensityEstimate:
    """
    Estimation à noyau gaussien tabulée sur la grille.

    values[i] = (1 / (n·h)) · Σ_j φ((grid[i] − draws[j]) / h)

    Args:
        sample:    PosteriorSample ou tableau de tirages.
        bandwidth: largeur de bande imposée ; Silverman si None.
        grid_size: nombre de points de grille (≥ 128).
    """
    x = _as_draws(sample)
    require(int(grid_size) == grid_size and grid_size >= config.MIN_GRID_SIZE,
            f"grid_size doit être un entier ≥ {config.MIN_GRID_SIZE} (reçu {grid_size})")
    grid_size = int(grid_size)

    if bandwidth is None:
        h = silverman_bandwidth(x)
    else:
        require(math.isfinite(bandwidth) and bandwidth > 0, f"largeur de bande invalide : {bandwidth}")
        h = float(bandwidth)

    marge = config.GRID_PAD_BANDWIDTHS * h
    grid = np.linspace(float(x.min()) - marge, float(x.max()) + marge, grid_size)

    if x.size * grid_size <= config.DIRECT_KDE_LIMIT:
        values = _kde_direct(x, grid, h)
        chemin = "direct"
    else:
        values = _kde_binned(x, grid, h)
        chemin = "binning+FFT"

    estimate = DensityEstimate.from_values(grid, values, bandwidth=h, sample_size=x.size)
    logger.debug(
        "KDE (%s) : n=%d h=%.6g grille=[%.6g, %.6g] mode=%.6g (densité %.6g) masse=%.6f",
        chemin, x.size, h, grid[0], grid[-1],
        estimate.mode_location, estimate.mode_density, estimate.mass(),
    )
    return estimate


def _kde_direct(x: np.ndarray, grid: np.ndarray, h: float) -> np.ndarray:
    """Somme exacte des noyaux, par blocs de tirages."""
    cumul = np.zeros_like(grid)
    bloc = max(1, _DIRECT_BLOCK // grid.size)
    for debut in range(0, x.size, bloc):
        z = (grid[:, None] - x[None, debut:debut + bloc]) / h
        cumul += np.exp(-0.5 * z * z).sum(axis=1)
    return cumul / (x.size * h * math.sqrt(2.0 * math.pi))


def _kde_binned(x: np.ndarray, grid: np.ndarray, h: float) -> np.ndarray:
    """Binning linéaire sur la grille puis convolution FFT avec le noyau discrétisé."""
    g = grid.size
    dx = float(grid[1] - grid[0])

    position = (x - grid[0]) / dx
    idx = np.clip(np.floor(position).astype(np.int64), 0, g - 2)
    frac = position - idx
    poids = (np.bincount(idx, weights=1.0 - frac, minlength=g)
             + np.bincount(idx + 1, weights=frac, minlength=g))

    portee = min(g - 1, int(math.ceil(_KERNEL_REACH * h / dx)))
    decalages = np.arange(-portee, portee + 1) * dx
    noyau = stats.norm.pdf(decalages / h) / h

    values = fftconvolve(poids, noyau, mode="same") / x.size
    # Résidus négatifs de la FFT
    return np.clip(values, 0.0, None)


def kde_eval(est: DensityEstimate, theta: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """Interpolation linéaire sur la grille ; 0 hors de la grille."""
    valeurs = np.interp(theta, est.grid, est.values, left=0.0, right=0.0)
    if np.ndim(valeurs) == 0:
        return float(valeurs)
    return valeurs


__all__ = [
    "DensityEstimate",
    "PosteriorSample",
    "kde_eval",
    "kde_fit",
    "silverman_bandwidth",
]
