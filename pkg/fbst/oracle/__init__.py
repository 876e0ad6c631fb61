"""
fbst.oracle
───────────
Vérités terrain indépendantes : e-values analytiques, intégrateur brut,
échantillonneur Metropolis du t-test à deux groupes.
Livré avec la bibliothèque pour que l'utilisateur puisse vérifier son installation.
"""

from fbst.oracle.analytic import AnalyticPosterior, analytic_evalue_flat
from fbst.oracle.brute_force import brute_force_evalue
from fbst.oracle.metropolis import (
    MetropolisChain,
    TTestData,
    batch_means_mcse,
    random_walk_metropolis,
    simulate_ttest_data,
    ttest_metropolis,
)

__all__ = [
    "AnalyticPosterior",
    "MetropolisChain",
    "TTestData",
    "analytic_evalue_flat",
    "batch_means_mcse",
    "brute_force_evalue",
    "random_walk_metropolis",
    "simulate_ttest_data",
    "ttest_metropolis",
]
