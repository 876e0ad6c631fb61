"""
fbst.output
───────────
Sorties : document de résultat (json / texte) et figure SVG.
"""

from fbst.output.result_writer import (
    OUTPUT_FORMATS,
    ResultDocument,
    format_summary,
    read_result,
    render_result,
    write_result,
)
from fbst.output.svg_plotter import PlotSpec, render_fbst_plot, write_svg

__all__ = [
    "OUTPUT_FORMATS",
    "PlotSpec",
    "ResultDocument",
    "format_summary",
    "read_result",
    "render_fbst_plot",
    "render_result",
    "write_result",
    "write_svg",
]
