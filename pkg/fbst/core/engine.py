"""
engine.py
─────────
Orchestration complète du Full Bayesian Significance Test.

Pipeline en 5 étapes (ordre séquentiel, non contournable) :
    1. kde_fit            densité a posteriori estimée
    2. surprise_fit       s(θ) = p̂(θ|x) / r(θ)
    3. tangential_region  {θ : s(θ) > s(θ₀)}
    4. evalue_grid / mc   ēv(H₀)
    5. pvalue_evalue + standardized_evalue

Usage :
    result = fbst(sample, theta0=0.0, k=3, h=2)
    print(result.e_value_against, result.sev)
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import asdict, dataclass, field
from typing import Mapping, Optional

import numpy as np
from scipy.integrate import trapezoid
from tqdm import tqdm

from fbst import config
from fbst.core.evalue import (
    check_dimensions,
    evalue_grid,
    evalue_mc,
    pvalue_evalue,
    standardized_evalue,
)
from fbst.core.reference import ReferenceFunction
from fbst.core.surprise import SurpriseFunction, TangentialRegion, surprise_fit, tangential_region
from fbst.density.kde import DensityEstimate, PosteriorSample, kde_fit
from fbst.errors import require

logger = logging.getLogger(__name__)

ESTIMATORS = ("grid", "monte_carlo")
_ESTIMATOR_ALIASES = {"grid": "grid", "monte_carlo": "monte_carlo", "mc": "monte_carlo"}


@dataclass(frozen=True)
class FbstResult:
    # --- Résultats du test ---
    e_value_against     : float            # ēv(H₀)
    e_value_in_favor    : float            # ev(H₀) = 1 − ēv(H₀)
    p_value             : float            # pv₀
    sev_against         : float            # s̄ev(H₀)
    sev                 : float            # sev(H₀)
    dim_theta           : int              # k
    dim_null            : int              # h
    null_value          : float            # θ₀
    reference_descriptor: str
    estimator           : str              # "grid" | "monte_carlo"

    # --- Diagnostics ---
    label                : str = "Parameter"
    sample_size          : int = 0
    bandwidth            : float = 0.0
    grid_size            : int = 0
    posterior_mode       : float = 0.0     # M
    posterior_mode_density: float = 0.0
    null_posterior_density: float = 0.0    # p̂(θ₀|x)
    s_star               : float = 0.0
    relative_null_ratio  : float = 0.0
    null_corroborated    : Optional[bool] = None    # s(θ₀) ≥ 1 (référence a priori uniquement)
    corroborated_mass    : Optional[float] = None   # masse de {θ : s(θ) ≥ 1}

    # --- Objets intermédiaires (graphique) ---
    posterior: Optional[DensityEstimate]  = field(default=None, repr=False, compare=False)
    surprise : Optional[SurpriseFunction] = field(default=None, repr=False, compare=False)
    region   : Optional[TangentialRegion] = field(default=None, repr=False, compare=False)

    @property
    def reference_label(self) -> str:
        return "Flat" if self.reference_descriptor == "flat" else "User-defined"

    def to_dict(self) -> dict:
        """Champs scalaires uniquement (sans les objets intermédiaires)."""
        d = asdict(self)
        for cle in ("posterior", "surprise", "region"):
            d.pop(cle, None)
        return d


def corroboration(s: SurpriseFunction, posterior: DensityEstimate) -> tuple[Optional[bool], Optional[float]]:
    """
    Pour une référence a priori : θ₀ est-il corroboré (s(θ₀) ≥ 1) et quelle
    masse a posteriori porte {θ : s(θ) ≥ 1} ? Sans objet pour la référence plate.
    """
    if s.reference.is_flat:
        return None, None
    total = float(trapezoid(posterior.values, posterior.grid))
    masse = float(trapezoid(np.where(s.values >= 1.0, posterior.values, 0.0), posterior.grid))
    return bool(s.s_star >= 1.0), (min(1.0, max(0.0, masse / total)) if total > 0 else 0.0)


def _normalize_estimator(estimator: str) -> str:
    cle = str(estimator).strip().lower()
    require(cle in _ESTIMATOR_ALIASES, f"estimateur inconnu : '{estimator}' (grid ou monte_carlo)")
    return _ESTIMATOR_ALIASES[cle]


def _run_from_posterior(posterior: DensityEstimate,
                        theta0: float,
                        ref: ReferenceFunction,
                        k: int,
                        h: int,
                        estimator: str,
                        sample: Optional[PosteriorSample],
                        label: str) -> FbstResult:
    """Étapes 2 à 5 à partir d'une densité déjà estimée."""
    s = surprise_fit(posterior, ref, theta0)
    region = tangential_region(s)

    if estimator == "monte_carlo":
        require(sample is not None, "l'estimateur monte_carlo exige les tirages")
        ev_against = evalue_mc(sample, s)
    else:
        ev_against = evalue_grid(posterior, region)

    ratio = s.relative_null_ratio
    if ratio > 0.0:
        p_value = pvalue_evalue(ratio, k, h)
    else:
        logger.warning("Densité a posteriori nulle en θ₀ = %g : pv₀ = 0 (limite)", theta0)
        p_value = 0.0

    sev = standardized_evalue(ev_against, k, h)
    corrobore, masse_corroboree = corroboration(s, posterior)

    result = FbstResult(
        e_value_against        = ev_against,
        e_value_in_favor       = 1.0 - ev_against,
        p_value                = p_value,
        sev_against            = sev.sev_against,
        sev                    = sev.sev,
        dim_theta              = int(k),
        dim_null               = int(h),
        null_value             = float(theta0),
        reference_descriptor   = ref.describe(),
        estimator              = estimator,
        label                  = label,
        sample_size            = sample.n if sample is not None else posterior.sample_size,
        bandwidth              = posterior.bandwidth,
        grid_size              = posterior.grid_size,
        posterior_mode         = posterior.mode_location,
        posterior_mode_density = posterior.mode_density,
        null_posterior_density = s.s0_posterior_density,
        s_star                 = s.s_star,
        relative_null_ratio    = ratio,
        null_corroborated      = corrobore,
        corroborated_mass      = masse_corroboree,
        posterior              = posterior,
        surprise               = s,
        region                 = region,
    )
    logger.info(
        "FBST '%s' H0: θ=%g | ēv=%.7g pv0=%.7g sev=%.7g (k=%d, h=%d, %s, %s)",
        label, theta0, result.e_value_against, result.p_value, result.sev,
        k, h, result.reference_descriptor, estimator,
    )
    return result


def fbst(sample: PosteriorSample,
         theta0: float,
         ref: Optional[ReferenceFunction] = None,
         *,
         k: int,
         h: int,
         estimator: str = "grid",
         bandwidth: Optional[float] = None,
         grid_size: int = config.DEFAULT_GRID_SIZE) -> FbstResult:
    """
    FBST complet à partir des tirages a posteriori.

    Args:
        sample:    tirages a posteriori du paramètre testé.
        theta0:    valeur de l'hypothèse nulle ponctuelle H₀ : θ = θ₀.
        ref:       fonction de référence (plate si None).
        k, h:      dimensions de Θ et de l'ensemble nul — obligatoires.
        estimator: "grid" (défaut) ou "monte_carlo".
    """
    check_dimensions(k, h)
    estimator = _normalize_estimator(estimator)
    ref = ref or ReferenceFunction.flat()

    posterior = kde_fit(sample, bandwidth=bandwidth, grid_size=grid_size)
    return _run_from_posterior(posterior, theta0, ref, k, h, estimator, sample, sample.label)


def fbst_density(posterior: DensityEstimate,
                 theta0: float,
                 ref: Optional[ReferenceFunction] = None,
                 *,
                 k: int,
                 h: int,
                 label: str = "Parameter") -> FbstResult:
    """FBST sur une densité a posteriori déjà tabulée (forme close), estimateur grille."""
    check_dimensions(k, h)
    return _run_from_posterior(posterior, theta0, ref or ReferenceFunction.flat(), k, h, "grid", None, label)


def reference_sensitivity(sample: PosteriorSample,
                          theta0: float,
                          refs: Mapping[str, ReferenceFunction],
                          k: int,
                          h: int,
                          estimator: str = "grid",
                          bandwidth: Optional[float] = None,
                          grid_size: int = config.DEFAULT_GRID_SIZE) -> dict[str, FbstResult]:
    """
    Robustesse de ēv au choix de la référence : une seule KDE,
    un test par référence fournie.
    """
    check_dimensions(k, h)
    require(len(refs) > 0, "aucune référence fournie")
    estimator = _normalize_estimator(estimator)
    posterior = kde_fit(sample, bandwidth=bandwidth, grid_size=grid_size)

    resultats = {}
    for nom, ref in refs.items():
        resultats[nom] = _run_from_posterior(posterior, theta0, ref, k, h, estimator, sample, sample.label)
    return resultats


def fbst_batch(samples: Mapping[str, PosteriorSample],
               theta0: float,
               ref: Optional[ReferenceFunction] = None,
               *,
               k: int,
               h: int,
               estimator: str = "grid",
               grid_size: int = config.DEFAULT_GRID_SIZE,
               max_workers: Optional[int] = None,
               progress: bool = False) -> dict[str, FbstResult]:
    """
    Un FBST par paramètre (ex. chaque coefficient d'une régression),
    exécutés en parallèle. L'ordre des clés d'entrée est conservé.
    """
    check_dimensions(k, h)

    resultats: dict[str, FbstResult] = {}
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        futures = {
            pool.submit(fbst, sample, theta0, ref, k=k, h=h, estimator=estimator, grid_size=grid_size): label
            for label, sample in samples.items()
        }
        for future in tqdm(as_completed(futures), total=len(futures), desc="FBST", disable=not progress):
            resultats[futures[future]] = future.result()

    return {label: resultats[label] for label in samples}
