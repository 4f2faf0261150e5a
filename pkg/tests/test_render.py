import xml.etree.ElementTree as ET

import pytest

from irbox.core_model import BalanceSheetRecord, PanelMode, build_panel
from irbox.fractal_gasket import gasket_at_depth
from irbox.render import EmptyLayerSet, RenderSpec, render_gasket_svg, render_irbox_svg


def panel(pairs=((3, 1), (1, 1), (1, 3)), distress=False):
    recs = [
        BalanceSheetRecord(f"F{i}", 0, d, e) for i, (d, e) in enumerate(pairs)
    ]
    return build_panel(recs, PanelMode.CROSS_SECTION, distress_mode=distress)


def svg_coordinates(svg_text):
    """All numeric coordinates in the document, as (axis, value) pairs."""
    root = ET.fromstring(svg_text)
    coords = []
    for el in root.iter():
        for attr, axis in (
            ("x", "x"), ("x1", "x"), ("x2", "x"), ("cx", "x"),
            ("y", "y"), ("y1", "y"), ("y2", "y"), ("cy", "y"),
        ):
            if attr in el.attrib:
                coords.append((axis, float(el.attrib[attr])))
        if "points" in el.attrib:
            for pair in el.attrib["points"].split():
                x, y = pair.split(",")
                coords.append(("x", float(x)))
                coords.append(("y", float(y)))
    return coords


class TestRenderIrbox:
    def test_well_formed_and_in_viewbox(self):
        spec = RenderSpec(show_unity=True, tr_levels=(2.0,), firi_levels=(0.5,))
        svg = render_irbox_svg(panel(), spec)
        root = ET.fromstring(svg)
        assert root.tag.endswith("svg")
        for axis, value in svg_coordinates(svg):
            limit = spec.width if axis == "x" else spec.height
            assert -1e-9 <= value <= limit + 1e-9

    def test_two_rays_at_half_level(self):
        spec = RenderSpec(show_points=False, firi_levels=(0.5,))
        svg = render_irbox_svg(panel(), spec)
        assert svg.count('class="iso-firi"') == 2

    def test_one_ray_at_unity_level(self):
        spec = RenderSpec(show_points=False, firi_levels=(1.0,))
        svg = render_irbox_svg(panel(), spec)
        assert svg.count('class="iso-firi"') == 1

    def test_points_colored_by_region(self):
        svg = render_irbox_svg(panel(), RenderSpec())
        assert svg.count('class="point"') == 3
        assert "#c23b22" in svg  # above unity
        assert "#6a3d9a" in svg  # on unity
        assert "#1f6fb2" in svg  # below unity

    def test_distress_extension_rendered(self):
        svg = render_irbox_svg(
            panel(((2, -1), (3, 2)), distress=True), RenderSpec()
        )
        assert 'class="distress-extension"' in svg

    def test_gasket_overlay(self):
        spec = RenderSpec(show_points=False, gasket_depth=2)
        svg = render_irbox_svg(panel(), spec)
        assert svg.count('class="gasket"') == 18

    def test_empty_layer_set(self):
        spec = RenderSpec(show_points=False)
        with pytest.raises(EmptyLayerSet):
            render_irbox_svg(panel(), spec)

    def test_deterministic(self):
        spec = RenderSpec(show_unity=True, firi_levels=(0.5,))
        assert render_irbox_svg(panel(), spec) == render_irbox_svg(panel(), spec)


class TestRenderGasket:
    def test_polygon_count_matches_state(self):
        state = gasket_at_depth(5)
        svg = render_gasket_svg(state)
        assert svg.count("<polygon") == 486

    def test_well_formed_and_in_viewbox(self):
        svg = render_gasket_svg(gasket_at_depth(3), width=400, height=400)
        ET.fromstring(svg)
        for axis, value in svg_coordinates(svg):
            assert -1e-9 <= value <= 400 + 1e-9
