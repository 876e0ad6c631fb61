"""
special_math.py
===============
Fonctions spéciales nécessaires à la partie asymptotique du test :

    - fonction d'erreur et log-gamma (scipy.special)
    - gamma incomplète inférieure régularisée P(a, x)
      (série pour x < a + 1, fraction continue sinon — découpage Numerical Recipes)
    - fonction de répartition, densité et quantile du χ²
    - densités des familles de référence (plate, normale, Cauchy, Student)

Toutes les fonctions sont pures : aucune donnée partagée, appelables
depuis plusieurs threads sans précaution.
"""

import logging
import math
import sys
from dataclasses import dataclass, field
from typing import Mapping, Union

import numpy as np
from scipy import special, stats
from scipy.optimize import brentq

from fbst.errors import DomainError, NumericalError, require

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# ------------------------------------------------------------------
# Constantes numériques
# ------------------------------------------------------------------

GAMMA_ACCURACY  = 1.0e-15
GAMMA_MAX_ITER  = 100_000
_FPMIN          = sys.float_info.min / sys.float_info.epsilon

# Newton : nombre de pas de polissage après le bracketing
QUANTILE_NEWTON_STEPS = 3


def erf(x: ArrayLike) -> ArrayLike:
    """Fonction d'erreur."""
    return special.erf(x)


def log_gamma(a: float) -> float:
    """ln Γ(a) pour a > 0."""
    require(a > 0, f"log_gamma : a doit être > 0 (reçu {a})")
    return float(special.gammaln(a))


# ══════════════════════════════════════════════════════════════════════
# GAMMA INCOMPLÈTE RÉGULARISÉE
# ══════════════════════════════════════════════════════════════════════

def reg_lower_incomplete_gamma(a: float, x: float) -> float:
    """
    P(a, x) = γ(a, x) / Γ(a).

    Args:
        a: paramètre de forme, strictement positif.
        x: borne supérieure d'intégration, x ≥ 0 (math.inf accepté).

    Returns:
        Probabilité dans [0, 1], croissante en x.

    Raises:
        DomainError: si a ≤ 0, x < 0 ou NaN.
    """
    require(not (math.isnan(a) or math.isnan(x)), "reg_lower_incomplete_gamma : NaN reçu")
    require(a > 0.0, f"paramètre a non positif : {a}")
    require(x >= 0.0, f"x négatif : {x}")

    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0

    if x < a + 1.0:
        valeur = _gamma_series(a, x)
    else:
        valeur = 1.0 - _gamma_continued_fraction(a, x)

    # Garde-fou virgule flottante
    return min(1.0, max(0.0, valeur))


def _gamma_series(a: float, x: float) -> float:
    """Représentation en série de P(a, x), valable pour x < a + 1."""
    gln = special.gammaln(a)
    ap = a
    terme = 1.0 / a
    somme = terme
    for _ in range(GAMMA_MAX_ITER):
        ap += 1.0
        terme *= x / ap
        somme += terme
        if abs(terme) < abs(somme) * GAMMA_ACCURACY:
            return somme * math.exp(-x + a * math.log(x) - gln)
    raise NumericalError(f"série gamma incomplète non convergée (a={a}, x={x})")


def _gamma_continued_fraction(a: float, x: float) -> float:
    """Q(a, x) = 1 − P(a, x) par fraction continue (Lentz modifié), x ≥ a + 1."""
    gln = special.gammaln(a)
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, GAMMA_MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < GAMMA_ACCURACY:
            return math.exp(-x + a * math.log(x) - gln) * h
    raise NumericalError(f"fraction continue gamma non convergée (a={a}, x={x})")


# ══════════════════════════════════════════════════════════════════════
# LOI DU χ²
# ══════════════════════════════════════════════════════════════════════

def _check_df(df: float) -> float:
    require(df is not None and not math.isnan(df), "degrés de liberté manquants")
    require(df > 0, f"degrés de liberté non positifs : {df}")
    return float(df)


def chisq_cdf(x: float, df: float) -> float:
    """F_df(x) = P(df/2, x/2)."""
    df = _check_df(df)
    require(not math.isnan(x), "chisq_cdf : x est NaN")
    require(x >= 0.0, f"chisq_cdf : x négatif ({x})")
    return reg_lower_incomplete_gamma(df / 2.0, x / 2.0)


def chisq_pdf(x: float, df: float) -> float:
    """Densité du χ² à df degrés de liberté."""
    df = _check_df(df)
    require(x >= 0.0, f"chisq_pdf : x négatif ({x})")
    demi = df / 2.0
    if x == 0.0:
        if df < 2.0:
            return math.inf
        return 0.5 if df == 2.0 else 0.0
    log_pdf = (demi - 1.0) * math.log(x) - x / 2.0 - demi * math.log(2.0) - special.gammaln(demi)
    return math.exp(log_pdf)


def chisq_quantile(p: float, df: float) -> float:
    """
    Quantile F_df⁻¹(p) du χ².

    Bracketing sur [0, df + 20·√(2·df) + 20] (élargi si nécessaire),
    racine par Brent puis quelques pas de Newton (la dérivée est la densité).

    Raises:
        DomainError: si p ∉ [0, 1) ou df ≤ 0.
    """
    df = _check_df(df)
    require(not math.isnan(p), "chisq_quantile : p est NaN")
    require(0.0 <= p < 1.0, f"chisq_quantile : p hors de [0, 1) ({p})")

    if p == 0.0:
        return 0.0

    lo = 0.0
    hi = df + 20.0 * math.sqrt(2.0 * df) + 20.0
    while chisq_cdf(hi, df) < p:
        lo, hi = hi, 2.0 * hi
        logger.debug("chisq_quantile : élargissement du bracket → [%.3f, %.3f]", lo, hi)

    x = brentq(lambda t: chisq_cdf(t, df) - p, lo, hi, xtol=1e-14, rtol=4 * sys.float_info.epsilon, maxiter=500)

    # Polissage de Newton, accepté seulement s'il améliore le résidu
    residu = chisq_cdf(x, df) - p
    for _ in range(QUANTILE_NEWTON_STEPS):
        densite = chisq_pdf(x, df)
        if residu == 0.0 or not math.isfinite(densite) or densite <= 0.0:
            break
        candidat = x - residu / densite
        if not (lo <= candidat <= hi):
            break
        nouveau = chisq_cdf(candidat, df) - p
        if abs(nouveau) >= abs(residu):
            break
        x, residu = candidat, nouveau

    return x


# ══════════════════════════════════════════════════════════════════════
# FAMILLES DE DENSITÉS DE RÉFÉRENCE
# ══════════════════════════════════════════════════════════════════════

# Paramètres attendus par famille, dans l'ordre du descripteur
FAMILY_PARAMS = {
    "flat"     : (),
    "normal"   : ("mean", "sd"),
    "cauchy"   : ("location", "scale"),
    "student_t": ("location", "scale", "df"),
}

# Paramètres qui doivent être strictement positifs
_POSITIVE_PARAMS = {"sd", "scale", "df"}


@dataclass(frozen=True)
class DensityFamily:
    """
    Famille paramétrique de densité utilisée comme fonction de référence r(θ).

    flat : r(θ) = 1 partout, sans paramètre.
    """
    family: str
    params: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        require(self.family in FAMILY_PARAMS, f"famille inconnue : '{self.family}'")
        attendus = set(FAMILY_PARAMS[self.family])
        recus = set(self.params)
        require(recus == attendus,
                f"{self.family} : paramètres attendus {sorted(attendus)}, reçus {sorted(recus)}")
        for nom, valeur in self.params.items():
            require(math.isfinite(valeur), f"{self.family} : paramètre {nom} non fini")
            if nom in _POSITIVE_PARAMS:
                require(valeur > 0, f"{self.family} : {nom} doit être > 0 (reçu {valeur})")

    # --- Constructeurs ------------------------------------------------

    @classmethod
    def flat(cls) -> "DensityFamily":
        return cls("flat", {})

    @classmethod
    def normal(cls, mean: float, sd: float) -> "DensityFamily":
        return cls("normal", {"mean": float(mean), "sd": float(sd)})

    @classmethod
    def cauchy(cls, location: float, scale: float) -> "DensityFamily":
        return cls("cauchy", {"location": float(location), "scale": float(scale)})

    @classmethod
    def student_t(cls, location: float, scale: float, df: float) -> "DensityFamily":
        return cls("student_t", {"location": float(location), "scale": float(scale), "df": float(df)})

    def describe(self) -> str:
        """Descripteur compact, ex. 'cauchy:location=0,scale=0.7071'."""
        if self.family == "flat":
            return "flat"
        parts = ",".join(f"{nom}={self.params[nom]:g}" for nom in FAMILY_PARAMS[self.family])
        return f"{self.family}:{parts}"


def density_eval(fam: DensityFamily, theta: ArrayLike) -> ArrayLike:
    """
    Densité de la famille en θ (scalaire ou tableau numpy).
    flat renvoie exactement 1.
    """
    t = np.asarray(theta, dtype=float)
    p = fam.params

    if fam.family == "flat":
        valeurs = np.ones_like(t)
    elif fam.family == "normal":
        valeurs = stats.norm.pdf(t, loc=p["mean"], scale=p["sd"])
    elif fam.family == "cauchy":
        valeurs = stats.cauchy.pdf(t, loc=p["location"], scale=p["scale"])
    elif fam.family == "student_t":
        valeurs = stats.t.pdf(t, p["df"], loc=p["location"], scale=p["scale"])
    else:
        raise DomainError(f"famille inconnue : '{fam.family}'")

    if np.ndim(valeurs) == 0:
        return float(valeurs)
    return valeurs
