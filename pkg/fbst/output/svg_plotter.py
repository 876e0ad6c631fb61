"""
svg_plotter.py
──────────────
Figure FBST en SVG autonome :
  - courbe de surprise s(θ)
  - aire sous la courbe, bleue sur l'ensemble tangentiel, rouge sur le complément
  - point (θ₀, s*) et ligne pointillée horizontale à s*
  - axes gradués

La géométrie de la courbe et des aires est émise en coordonnées du paramètre
dans un groupe <g class="plot-area"> portant la transformation vers les pixels,
ce qui rend les aires et les abscisses relisibles depuis le fichier.
"""

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union
from xml.sax.saxutils import escape

import numpy as np

from fbst import config
from fbst.core.surprise import SurpriseFunction, TangentialRegion
from fbst.errors import DomainError, OutputError, UsageError, require

logger = logging.getLogger(__name__)

# Marges du cadre (pixels)
_MARGIN_LEFT   = 70
_MARGIN_RIGHT  = 20
_MARGIN_TOP    = 20
_MARGIN_BOTTOM = 50

_CURVE_COLOR = "#222222"
_AXIS_COLOR  = "#444444"


@dataclass(frozen=True)
class PlotSpec:
    width_px        : int = config.PLOT_WIDTH
    height_px       : int = config.PLOT_HEIGHT
    left_boundary   : Optional[float] = None
    right_boundary  : Optional[float] = None
    color_tangential: str = config.COLOR_TANGENTIAL
    color_complement: str = config.COLOR_COMPLEMENT
    show_cutoff_line: bool = True

    def __post_init__(self):
        require(int(self.width_px) > _MARGIN_LEFT + _MARGIN_RIGHT and int(self.height_px) > _MARGIN_TOP + _MARGIN_BOTTOM,
                f"dimensions de figure trop petites : {self.width_px}×{self.height_px}", UsageError)
        for nom in ("left_boundary", "right_boundary"):
            borne = getattr(self, nom)
            require(borne is None or math.isfinite(borne), f"{nom} non fini", UsageError)
        if self.left_boundary is not None and self.right_boundary is not None:
            require(self.left_boundary < self.right_boundary,
                    f"intervalle d'affichage invalide : gauche {self.left_boundary:g} ≥ droite {self.right_boundary:g}",
                    UsageError)


class _SvgDocument:
    """Accumulateur d'éléments SVG, à la manière d'un builder texte."""

    def __init__(self, width: int, height: int, title: str):
        self.parts = [
            '<?xml version="1.0" encoding="UTF-8" standalone="no"?>\n',
            f'<svg version="1.1" width="{width}" height="{height}" viewBox="0 0 {width} {height}" '
            f'xmlns="http://www.w3.org/2000/svg">\n',
            f'<title>{escape(title)}</title>\n',
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>\n',
        ]

    def group_start(self, cls: str, transform: str = "") -> None:
        attr = f' transform="{transform}"' if transform else ""
        self.parts.append(f'<g class="{cls}"{attr}>\n')

    def group_end(self) -> None:
        self.parts.append('</g>\n')

    def polygon(self, points: str, cls: str, fill: str) -> None:
        self.parts.append(f'<polygon class="{cls}" points="{points}" fill="{fill}" fill-opacity="0.45" stroke="none"/>\n')

    def polyline(self, points: str, cls: str, stroke: str, width: float = 1.5) -> None:
        self.parts.append(f'<polyline class="{cls}" points="{points}" fill="none" stroke="{stroke}" '
                          f'stroke-width="{width}" vector-effect="non-scaling-stroke"/>\n')

    def line(self, x1: float, y1: float, x2: float, y2: float, cls: str, stroke: str, extra: str = "") -> None:
        self.parts.append(f'<line class="{cls}" x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
                          f'stroke="{stroke}" stroke-width="1" {extra}/>\n')

    def circle(self, cx: float, cy: float, r: float, cls: str, fill: str) -> None:
        self.parts.append(f'<circle class="{cls}" cx="{cx:.2f}" cy="{cy:.2f}" r="{r}" fill="{fill}"/>\n')

    def text(self, x: float, y: float, string: str, anchor: str = "middle", extra: str = "") -> None:
        self.parts.append(f'<text x="{x:.2f}" y="{y:.2f}" text-anchor="{anchor}" font-family="sans-serif" '
                          f'font-size="12" fill="{_AXIS_COLOR}" {extra}>{escape(string)}</text>\n')

    def get_svg(self) -> str:
        return "".join(self.parts) + "</svg>\n"


def _num(x: float) -> str:
    texte = f"{x:.9g}"
    return "0" if texte == "-0" else texte


def _points(xs: np.ndarray, ys: np.ndarray) -> str:
    return " ".join(f"{_num(x)},{_num(y)}" for x, y in zip(xs, ys))


def _nice_ticks(lo: float, hi: float, target: int = 6) -> np.ndarray:
    """Graduations « rondes » (pas 1, 2 ou 5 × 10^n) dans [lo, hi]."""
    brut = (hi - lo) / max(target - 1, 1)
    puissance = 10.0 ** math.floor(math.log10(brut))
    pas = next(m * puissance for m in (1.0, 2.0, 5.0, 10.0) if m * puissance >= brut)
    debut = math.ceil(lo / pas - 1e-9) * pas
    ticks = np.arange(debut, hi + pas * 1e-9, pas)
    return np.round(ticks / pas) * pas + 0.0


def _split_transitions(s: SurpriseFunction, region: TangentialRegion) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Insère le milieu de chaque segment où l'appartenance change ;
    chaque demi-segment prend la couleur de son nœud de grille.
    Retourne (abscisses, surprises, couleur par segment).
    """
    mask = region.member_mask
    trans = np.nonzero(mask[:-1] != mask[1:])[0]
    milieux_x = (s.grid[trans] + s.grid[trans + 1]) / 2.0
    milieux_y = (s.values[trans] + s.values[trans + 1]) / 2.0

    xs = np.insert(s.grid, trans + 1, milieux_x)
    ys = np.insert(s.values, trans + 1, milieux_y)
    est_noeud = np.insert(np.ones(mask.size, dtype=bool), trans + 1, False)
    membre = np.insert(mask, trans + 1, False)

    couleur = np.where(est_noeud[:-1], membre[:-1], membre[1:])
    return xs, ys, couleur


def render_fbst_plot(s: SurpriseFunction,
                     region: TangentialRegion,
                     spec: Optional[PlotSpec] = None,
                     x_label: str = "θ") -> str:
    """
    Document SVG de la figure FBST, déterministe pour des entrées identiques.

    Les bornes d'affichage recadrent la figure sans toucher aux résultats.

    Raises:
        DomainError: bornes excluant toute la grille, ou entrées incohérentes.
    """
    spec = spec or PlotSpec()
    require(region.member_mask.shape == s.grid.shape, "ensemble tangentiel et grille de tailles différentes")

    lo = float(s.grid[0]) if spec.left_boundary is None else max(float(s.grid[0]), spec.left_boundary)
    hi = float(s.grid[-1]) if spec.right_boundary is None else min(float(s.grid[-1]), spec.right_boundary)
    if not lo < hi:
        raise DomainError(
            f"les bornes d'affichage excluent toute la grille [{s.grid[0]:g}, {s.grid[-1]:g}]"
        )

    xs, ys, couleur = _split_transitions(s, region)

    # Recadrage
    garde = (xs > lo) & (xs < hi)
    x_c = np.concatenate(([lo], xs[garde], [hi]))
    y_c = np.interp(x_c, xs, ys)
    milieux = (x_c[:-1] + x_c[1:]) / 2.0
    idx = np.clip(np.searchsorted(xs, milieux, side="right") - 1, 0, couleur.size - 1)
    seg_tangentiel = couleur[idx]

    # Échelles
    y_max = max(float(y_c.max()), s.s_star) * 1.05
    y_max = y_max if y_max > 0 else 1.0
    largeur = int(spec.width_px) - _MARGIN_LEFT - _MARGIN_RIGHT
    hauteur = int(spec.height_px) - _MARGIN_TOP - _MARGIN_BOTTOM
    sx = largeur / (hi - lo)
    sy = hauteur / y_max
    tx = _MARGIN_LEFT - lo * sx
    ty = _MARGIN_TOP + hauteur

    def px(x: float) -> float:
        return tx + x * sx

    def py(y: float) -> float:
        return ty - y * sy

    titre = f"FBST {x_label} : H0 θ = {s.null_value:g}, s* = {s.s_star:.4g}"
    doc = _SvgDocument(int(spec.width_px), int(spec.height_px), titre)

    # Aires et courbe (coordonnées du paramètre)
    doc.group_start("plot-area", f"matrix({_num(sx)} 0 0 {_num(-sy)} {_num(tx)} {_num(ty)})")
    debut = 0
    n_seg = seg_tangentiel.size
    for j in range(1, n_seg + 1):
        if j < n_seg and seg_tangentiel[j] == seg_tangentiel[debut]:
            continue
        px_run = x_c[debut: j + 1]
        py_run = y_c[debut: j + 1]
        contour = _points(np.concatenate(([px_run[0]], px_run, [px_run[-1]])),
                          np.concatenate(([0.0], py_run, [0.0])))
        if seg_tangentiel[debut]:
            doc.polygon(contour, "tangential", spec.color_tangential)
        else:
            doc.polygon(contour, "complement", spec.color_complement)
        debut = j
    doc.polyline(_points(x_c, y_c), "surprise-curve", _CURVE_COLOR)
    doc.group_end()

    # Axes et graduations
    doc.group_start("axes")
    doc.line(_MARGIN_LEFT, ty, _MARGIN_LEFT + largeur, ty, "axis", _AXIS_COLOR)
    doc.line(_MARGIN_LEFT, _MARGIN_TOP, _MARGIN_LEFT, ty, "axis", _AXIS_COLOR)
    for t in _nice_ticks(lo, hi):
        doc.line(px(t), ty, px(t), ty + 5, "tick", _AXIS_COLOR)
        doc.text(px(t), ty + 18, f"{t:g}")
    for t in _nice_ticks(0.0, y_max):
        doc.line(_MARGIN_LEFT - 5, py(t), _MARGIN_LEFT, py(t), "tick", _AXIS_COLOR)
        doc.text(_MARGIN_LEFT - 8, py(t) + 4, f"{t:g}", anchor="end")
    doc.text(_MARGIN_LEFT + largeur / 2, int(spec.height_px) - 10, x_label)
    doc.text(16, _MARGIN_TOP + hauteur / 2, "surprise / density",
             extra=f'transform="rotate(-90 16 {_MARGIN_TOP + hauteur / 2:.2f})"')
    doc.group_end()

    # Seuil s* et point nul
    if spec.show_cutoff_line:
        doc.line(px(lo), py(s.s_star), px(hi), py(s.s_star), "cutoff", spec.color_tangential,
                 'stroke-dasharray="6,4"')
    if lo <= s.null_value <= hi:
        doc.circle(px(s.null_value), py(s.s_star), 4, "null-point", spec.color_tangential)
    else:
        logger.debug("θ₀ = %g hors de la fenêtre [%g, %g] : point nul non tracé", s.null_value, lo, hi)

    logger.debug("SVG : %d points de courbe, fenêtre [%g, %g], %d segments tangentiels",
                 x_c.size, lo, hi, int(seg_tangentiel.sum()))
    return doc.get_svg()


def write_svg(document: str, path: Union[str, Path]) -> None:
    """Écrit le document SVG (UTF-8, LF). OutputError si la destination n'est pas inscriptible."""
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(document)
    except OSError as exc:
        raise OutputError(f"écriture du graphique impossible : {path} — {exc}") from None
    logger.info("Graphique écrit : %s", path)
