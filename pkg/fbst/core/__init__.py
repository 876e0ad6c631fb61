"""
fbst.core
─────────
Le test lui-même : surprise, ensemble tangentiel, e-values, asymptotique.
"""

from fbst.core.engine import FbstResult, corroboration, fbst, fbst_batch, fbst_density, reference_sensitivity
from fbst.core.evalue import (
    StandardizedEvalue,
    bayesian_significance,
    check_dimensions,
    evalue_grid,
    evalue_mc,
    pvalue_evalue,
    standardized_evalue,
)
from fbst.core.reference import ReferenceFunction, parse_reference
from fbst.core.surprise import SurpriseFunction, TangentialRegion, surprise_fit, tangential_region

__all__ = [
    "FbstResult",
    "ReferenceFunction",
    "StandardizedEvalue",
    "SurpriseFunction",
    "TangentialRegion",
    "bayesian_significance",
    "check_dimensions",
    "corroboration",
    "evalue_grid",
    "evalue_mc",
    "fbst",
    "fbst_batch",
    "fbst_density",
    "parse_reference",
    "pvalue_evalue",
    "reference_sensitivity",
    "standardized_evalue",
    "surprise_fit",
    "tangential_region",
]
