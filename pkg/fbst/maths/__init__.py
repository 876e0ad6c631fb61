"""
fbst.maths
──────────
Fonctions spéciales : gamma incomplète, loi du χ², densités de référence.
"""

from fbst.maths.special_math import (
    DensityFamily,
    chisq_cdf,
    chisq_pdf,
    chisq_quantile,
    density_eval,
    erf,
    log_gamma,
    reg_lower_incomplete_gamma,
)

__all__ = [
    "DensityFamily",
    "chisq_cdf",
    "chisq_pdf",
    "chisq_quantile",
    "density_eval",
    "erf",
    "log_gamma",
    "reg_lower_incomplete_gamma",
]
