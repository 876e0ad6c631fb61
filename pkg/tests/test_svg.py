import xml.etree.ElementTree as ET

import numpy as np
import pytest

from fbst.core.engine import fbst
from fbst.errors import DomainError, UsageError
from fbst.output.svg_plotter import PlotSpec, render_fbst_plot

NS = "{http://www.w3.org/2000/svg}"


def _parse(svg: str) -> ET.Element:
    return ET.fromstring(svg.encode("utf-8"))


def _plot_area(root: ET.Element) -> ET.Element:
    return next(g for g in root.iter(f"{NS}g") if g.get("class") == "plot-area")


def _coords(element: ET.Element) -> np.ndarray:
    return np.array([[float(v) for v in p.split(",")] for p in element.get("points").split()])


def _area(points: np.ndarray) -> float:
    x, y = points[:, 0], points[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _polygons(root: ET.Element, cls: str) -> list[np.ndarray]:
    return [_coords(p) for p in _plot_area(root).iter(f"{NS}polygon") if p.get("class") == cls]


@pytest.fixture
def result(normal_sample):
    return fbst(normal_sample, 0.0, k=1, h=0)


def test_plot_spec_validation():
    with pytest.raises(UsageError):
        PlotSpec(left_boundary=1.0, right_boundary=-1.0)
    with pytest.raises(UsageError):
        PlotSpec(left_boundary=0.0, right_boundary=0.0)
    with pytest.raises(UsageError):
        PlotSpec(width_px=50)


def test_svg_is_well_formed(result):
    root = _parse(render_fbst_plot(result.surprise, result.region, x_label="theta"))
    assert root.tag == f"{NS}svg"
    classes = {e.get("class") for e in root.iter()}
    assert {"plot-area", "surprise-curve", "tangential", "complement", "cutoff", "null-point", "tick"} <= classes
    textes = [t.text for t in root.iter(f"{NS}text")]
    assert "theta" in textes and "surprise / density" in textes


def test_shaded_area_ratio_matches_evalue(result):
    root = _parse(render_fbst_plot(result.surprise, result.region))
    tangentiel = sum(_area(p) for p in _polygons(root, "tangential"))
    complement = sum(_area(p) for p in _polygons(root, "complement"))
    assert tangentiel / (tangentiel + complement) == pytest.approx(result.e_value_against, abs=0.02)


def test_right_boundary_crops_geometry(result):
    root = _parse(render_fbst_plot(result.surprise, result.region, PlotSpec(right_boundary=0.0)))
    area = _plot_area(root)
    formes = list(area.iter(f"{NS}polygon")) + list(area.iter(f"{NS}polyline"))
    assert formes
    for forme in formes:
        assert _coords(forme)[:, 0].max() <= 0.0


def test_left_boundary_crops_geometry(result):
    root = _parse(render_fbst_plot(result.surprise, result.region, PlotSpec(left_boundary=0.5)))
    courbe = next(_plot_area(root).iter(f"{NS}polyline"))
    assert _coords(courbe)[:, 0].min() >= 0.5


def test_empty_region_has_no_tangential_fill(normal_sample):
    mode = fbst(normal_sample, 0.0, k=1, h=0).posterior_mode
    res = fbst(normal_sample, mode, k=1, h=0)
    assert res.region.is_empty
    root = _parse(render_fbst_plot(res.surprise, res.region))
    assert _polygons(root, "tangential") == []
    assert len(_polygons(root, "complement")) == 1


def test_full_region_has_no_complement_fill(small_sample):
    res = fbst(small_sample, 50.0, k=1, h=0)
    assert res.region.is_full
    root = _parse(render_fbst_plot(res.surprise, res.region))
    assert _polygons(root, "complement") == []
    assert {e.get("class") for e in root.iter()} >= {"tangential"}
    assert "null-point" not in {e.get("class") for e in root.iter()}


def test_boundaries_outside_grid(result):
    with pytest.raises(DomainError):
        render_fbst_plot(result.surprise, result.region, PlotSpec(left_boundary=100.0))


def test_options_and_determinism(result):
    spec = PlotSpec(width_px=640, height_px=400, show_cutoff_line=False,
                    color_tangential="#00ff00", color_complement="#ff00ff")
    svg = render_fbst_plot(result.surprise, result.region, spec, x_label="a<b & c")
    assert svg == render_fbst_plot(result.surprise, result.region, spec, x_label="a<b & c")
    root = _parse(svg)
    assert root.get("width") == "640" and root.get("height") == "400"
    assert "cutoff" not in {e.get("class") for e in root.iter()}
    assert {p.get("fill") for p in _plot_area(root).iter(f"{NS}polygon")} == {"#00ff00", "#ff00ff"}
    assert "a<b & c" in [t.text for t in root.iter(f"{NS}text")]
