"""
fbst.density
────────────
Estimation de la densité a posteriori par noyau gaussien.
"""

from fbst.density.kde import DensityEstimate, PosteriorSample, kde_eval, kde_fit, silverman_bandwidth

__all__ = ["DensityEstimate", "PosteriorSample", "kde_eval", "kde_fit", "silverman_bandwidth"]
