"""
metropolis.py
─────────────
Échantillonneur Metropolis à marche aléatoire, minimal et auditable,
pour rejouer le t-test bayésien à deux groupes à l'échelle d'un poste.

Modèle (structure de Rouder) :
    y1 ~ N(μ + σ·δ/2, σ²)     y2 ~ N(μ − σ·δ/2, σ²)
    δ ~ Cauchy(0, r)          p(μ, σ²) ∝ 1/σ²

Paramétrage interne (μ, τ = ln σ, δ) : le Jacobien rend p(μ, τ) constant.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from fbst import config
from fbst.density.kde import PosteriorSample
from fbst.errors import NumericalError, require

logger = logging.getLogger(__name__)

ADAPT_EVERY = 100     # Fenêtre de réglage du pas pendant le burn-in
_SHRINK     = 0.8
_EXPAND     = 1.25


@dataclass(frozen=True)
class TTestData:
    group1: np.ndarray
    group2: np.ndarray

    def __post_init__(self):
        for nom in ("group1", "group2"):
            arr = np.asarray(getattr(self, nom), dtype=float).ravel()
            require(arr.size >= 2, f"{nom} : au moins 2 observations")
            require(bool(np.all(np.isfinite(arr))), f"{nom} : observations non finies")
            arr.setflags(write=False)
            object.__setattr__(self, nom, arr)

    def sufficient_stats(self) -> tuple[int, float, float, int, float, float]:
        """(n1, moyenne1, SC1, n2, moyenne2, SC2)."""
        g1, g2 = self.group1, self.group2
        return (g1.size, float(g1.mean()), float(((g1 - g1.mean()) ** 2).sum()),
                g2.size, float(g2.mean()), float(((g2 - g2.mean()) ** 2).sum()))


@dataclass(frozen=True)
class MetropolisChain:
    samples        : np.ndarray   # (itérations conservées, dimension)
    acceptance_rate: float        # après burn-in
    step_factor    : float        # facteur d'échelle final
    burn_in        : int


def simulate_ttest_data(n1: int, n2: int,
                        mean1: float, sd1: float,
                        mean2: float, sd2: float,
                        seed: Optional[int] = None,
                        exact_moments: bool = False) -> TTestData:
    """
    Données normales à deux groupes. Avec exact_moments, chaque groupe est
    recentré/réduit pour que moyenne et écart-type empiriques soient exactement
    les valeurs demandées.
    """
    rng = np.random.default_rng(seed)
    g1 = rng.normal(mean1, sd1, size=int(n1))
    g2 = rng.normal(mean2, sd2, size=int(n2))
    if exact_moments:
        g1 = (g1 - g1.mean()) / g1.std(ddof=1) * sd1 + mean1
        g2 = (g2 - g2.mean()) / g2.std(ddof=1) * sd2 + mean2
    return TTestData(g1, g2)


def random_walk_metropolis(log_target: Callable[[np.ndarray], float],
                           initial: Sequence[float],
                           scales: Sequence[float],
                           iterations: int,
                           seed: Optional[int] = None,
                           burn_in_fraction: float = config.BURN_IN_FRACTION) -> MetropolisChain:
    """
    Metropolis à marche aléatoire gaussienne diagonale.

    Le facteur d'échelle est réglé pendant le burn-in (écarté) pour viser
    un taux d'acceptation dans TARGET_ACCEPTANCE.

    Raises:
        NumericalError: log-cible initiale non finie, ou taux final hors de VALID_ACCEPTANCE.
    """
    require(iterations >= 1000, f"au moins 1000 itérations (reçu {iterations})")
    require(0.0 < burn_in_fraction < 1.0, "fraction de burn-in hors de ]0, 1[")

    rng = np.random.default_rng(seed)
    x = np.asarray(initial, dtype=float).copy()
    echelles = np.asarray(scales, dtype=float)
    dim = x.size
    require(echelles.shape == x.shape and bool(np.all(echelles > 0)), "échelles invalides")

    lp = float(log_target(x))
    if not math.isfinite(lp):
        raise NumericalError("log-densité cible non finie au point initial")

    n_burn = int(round(burn_in_fraction * iterations))
    bruits = rng.standard_normal((iterations, dim))
    log_u = np.log(rng.random(iterations))

    facteur = 2.38 / math.sqrt(dim)
    bas, haut = config.TARGET_ACCEPTANCE
    chaine = np.empty((iterations - n_burn, dim))
    acceptes_fenetre = 0
    acceptes = 0

    for i in range(iterations):
        proposition = x + facteur * echelles * bruits[i]
        lp_prop = float(log_target(proposition))
        accepte = lp_prop - lp > log_u[i]
        if accepte:
            x, lp = proposition, lp_prop

        if i < n_burn:
            acceptes_fenetre += accepte
            if (i + 1) % ADAPT_EVERY == 0:
                taux = acceptes_fenetre / ADAPT_EVERY
                if taux < bas:
                    facteur *= _SHRINK
                elif taux > haut:
                    facteur *= _EXPAND
                acceptes_fenetre = 0
        else:
            chaine[i - n_burn] = x
            acceptes += accepte

    taux_final = acceptes / chaine.shape[0]
    logger.debug("Metropolis : %d itérations, burn-in %d, acceptation %.3f, facteur %.3f",
                 iterations, n_burn, taux_final, facteur)

    mini, maxi = config.VALID_ACCEPTANCE
    if not (mini <= taux_final <= maxi):
        raise NumericalError(f"réglage Metropolis raté : taux d'acceptation {taux_final:.3f} hors de [{mini}, {maxi}]")

    return MetropolisChain(samples=chaine, acceptance_rate=taux_final, step_factor=facteur, burn_in=n_burn)


def ttest_metropolis(data: TTestData,
                     prior_scale: float = math.sqrt(2.0) / 2.0,
                     iterations: int = config.MIN_ITERATIONS,
                     seed: int = 0) -> PosteriorSample:
    """
    Tirages a posteriori de la taille d'effet δ du t-test à deux groupes,
    avec un a priori Cauchy(0, prior_scale) sur δ.
    """
    require(prior_scale > 0, f"échelle a priori non positive : {prior_scale}")
    require(iterations >= config.MIN_ITERATIONS, f"au moins {config.MIN_ITERATIONS} itérations (reçu {iterations})")

    n1, ybar1, ss1, n2, ybar2, ss2 = data.sufficient_stats()
    n_total = n1 + n2
    log_cauchy_norm = math.log(math.pi * prior_scale)

    def log_posterior(theta: np.ndarray) -> float:
        mu, tau, delta = float(theta[0]), float(theta[1]), float(theta[2])
        if abs(tau) > 300.0:
            return -math.inf
        sigma = math.exp(tau)
        m1 = mu + sigma * delta / 2.0
        m2 = mu - sigma * delta / 2.0
        carres = ss1 + n1 * (ybar1 - m1) ** 2 + ss2 + n2 * (ybar2 - m2) ** 2
        log_prior = -log_cauchy_norm - math.log1p((delta / prior_scale) ** 2)
        return -n_total * tau - carres / (2.0 * sigma * sigma) + log_prior

    # Départ et échelles à partir des statistiques exhaustives
    sd_pool = math.sqrt((ss1 + ss2) / (n_total - 2)) if n_total > 2 else 1.0
    sd_pool = sd_pool if sd_pool > 0 else 1.0
    initial = [(ybar1 + ybar2) / 2.0, math.log(sd_pool), (ybar1 - ybar2) / sd_pool]
    scales = [sd_pool / math.sqrt(n_total), 1.0 / math.sqrt(2.0 * n_total), math.sqrt(1.0 / n1 + 1.0 / n2)]

    chain = random_walk_metropolis(log_posterior, initial, scales, iterations, seed=seed)
    logger.info("t-test Metropolis (seed %d) : %d tirages de δ, acceptation %.3f",
                seed, chain.samples.shape[0], chain.acceptance_rate)
    return PosteriorSample(chain.samples[:, 2].copy(), "delta")


def batch_means_mcse(chain: np.ndarray, n_batches: Optional[int] = None) -> float:
    """Erreur standard Monte-Carlo de la moyenne par la méthode des lots."""
    x = np.asarray(chain, dtype=float).ravel()
    n = x.size
    require(n >= 4, "chaîne trop courte pour la méthode des lots")
    if n_batches is None:
        taille = int(math.floor(math.sqrt(n)))
        n_batches = n // taille
    else:
        taille = n // n_batches
    require(n_batches >= 2 and taille >= 1, "nombre de lots invalide")
    moyennes = x[: n_batches * taille].reshape(n_batches, taille).mean(axis=1)
    return float(math.sqrt(taille * moyennes.var(ddof=1) / n))
