"""
fbst
────
Full Bayesian Significance Test sur tirages a posteriori :
e-value, p-value asymptotique, e-value standardisée, figure SVG.

    from fbst.core import fbst, ReferenceFunction
    from fbst.density import PosteriorSample
"""

from fbst.config import TOOL_VERSION as __version__

__all__ = ["__version__"]
