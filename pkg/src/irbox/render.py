"""Deterministic SVG rendering of the risk box and the gasket.

Output is plain text with no timestamps or environment-dependent state,
so identical inputs produce identical bytes. The vertical axis is flipped
inside the renderer (debt increases upward on screen) and every emitted
coordinate stays inside the declared viewBox.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core_model import Panel
from .errors import ValidationError
from .fractal_gasket import DEFAULT_DEPTH_CAP, TriangleSet, gasket_at_depth
from .irbox_geometry import (
    IRBox,
    IsoclineKind,
    RegionLabel,
    build_irbox,
    classify_point,
    isocline,
    unity_segment,
)


class EmptyLayerSet(ValidationError):
    """A render request with nothing to draw."""


REGION_COLORS = {
    RegionLabel.ABOVE_UNITY: "#c23b22",
    RegionLabel.ON_UNITY: "#6a3d9a",
    RegionLabel.BELOW_UNITY: "#1f6fb2",
    RegionLabel.DISTRESS: "#444444",
}

_ISO_COLORS = {
    IsoclineKind.TR: "#d9832b",
    IsoclineKind.NR: "#2b9a5e",
    IsoclineKind.ACO: "#8a5acc",
    IsoclineKind.FIRI_RAY: "#cc3d7a",
}

_MARGIN_FRAC = 0.05


@dataclass(frozen=True)
class RenderSpec:
    """Which layers to draw and at what pixel size."""

    width: int = 640
    height: int = 640
    show_points: bool = True
    show_unity: bool = False
    tr_levels: tuple[float, ...] = ()
    nr_levels: tuple[float, ...] = ()
    aco_levels: tuple[float, ...] = ()
    firi_levels: tuple[float, ...] = ()
    gasket_depth: int | None = None

    def has_layers(self) -> bool:
        return bool(
            self.show_points
            or self.show_unity
            or self.tr_levels
            or self.nr_levels
            or self.aco_levels
            or self.firi_levels
            or self.gasket_depth is not None
        )


def _fmt(v: float) -> str:
    return f"{v:.4f}"


class _Canvas:
    """Affine map from (e, d) domain coordinates to pixel space."""

    def __init__(self, width: int, height: int, e_lo: float, e_hi: float,
                 d_lo: float, d_hi: float):
        self.width = width
        self.height = height
        mx = width * _MARGIN_FRAC
        my = height * _MARGIN_FRAC
        span_e = max(e_hi - e_lo, 1e-12)
        span_d = max(d_hi - d_lo, 1e-12)
        self._sx = (width - 2 * mx) / span_e
        self._sy = (height - 2 * my) / span_d
        self._e_lo = e_lo
        self._d_lo = d_lo
        self._mx = mx
        self._my = my

    def to_px(self, e: float, d: float) -> tuple[float, float]:
        px = self._mx + (e - self._e_lo) * self._sx
        py = self.height - self._my - (d - self._d_lo) * self._sy
        return px, py


def _svg_header(width: int, height: int) -> str:
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )


def _line(canvas: _Canvas, seg, color: str, cls: str, dash: str = "") -> str:
    (e0, d0), (e1, d1) = seg
    x0, y0 = canvas.to_px(e0, d0)
    x1, y1 = canvas.to_px(e1, d1)
    dash_attr = f' stroke-dasharray="{dash}"' if dash else ""
    return (
        f'<line class="{cls}" x1="{_fmt(x0)}" y1="{_fmt(y0)}" x2="{_fmt(x1)}" '
        f'y2="{_fmt(y1)}" stroke="{color}" stroke-width="1"{dash_attr}/>'
    )


def _triangle_polygons(tset: TriangleSet, canvas: _Canvas, scale: float) -> list[str]:
    unit = scale / 2**tset.depth
    parts = []
    for corners, lower_right in ((tset.lr_corners, True), (tset.ul_corners, False)):
        for cx, cy in corners:
            x0, y0 = cx * unit, cy * unit
            if lower_right:
                verts = ((x0, y0), (x0 + unit, y0), (x0 + unit, y0 + unit))
            else:
                verts = ((x0, y0), (x0, y0 + unit), (x0 + unit, y0 + unit))
            pts = " ".join(
                f"{_fmt(px)},{_fmt(py)}"
                for px, py in (canvas.to_px(e, d) for e, d in verts)
            )
            parts.append(
                f'<polygon class="gasket" points="{pts}" fill="#e8b84b" '
                f'fill-opacity="0.55" stroke="#8a6d1f" stroke-width="0.4"/>'
            )
    return parts


def render_irbox_svg(
    panel: Panel,
    spec: RenderSpec,
    depth_cap: int = DEFAULT_DEPTH_CAP,
) -> str:
    """Render the panel's box with the layers requested in ``spec``."""
    if not spec.has_layers():
        raise EmptyLayerSet("render spec selects no layers")
    box = build_irbox(panel)
    canvas = _Canvas(spec.width, spec.height, box.e_min, box.side, 0.0, box.side)
    parts = [_svg_header(spec.width, spec.height)]

    # Box frame: main square plus the distress extension when present.
    x0, y0 = canvas.to_px(0.0, box.side)
    x1, y1 = canvas.to_px(box.side, 0.0)
    parts.append(
        f'<rect class="box" x="{_fmt(x0)}" y="{_fmt(y0)}" '
        f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" '
        f'fill="none" stroke="#222222" stroke-width="1"/>'
    )
    if box.e_min < 0:
        ex0, ey0 = canvas.to_px(box.e_min, box.side)
        parts.append(
            f'<rect class="distress-extension" x="{_fmt(ex0)}" y="{_fmt(ey0)}" '
            f'width="{_fmt(x0 - ex0)}" height="{_fmt(y1 - ey0)}" '
            f'fill="#f2d7d5" fill-opacity="0.5" stroke="#222222" '
            f'stroke-width="0.5" stroke-dasharray="4 3"/>'
        )

    if spec.gasket_depth is not None:
        state = gasket_at_depth(spec.gasket_depth, depth_cap=depth_cap)
        parts.extend(_triangle_polygons(state, canvas, box.side))

    if spec.show_unity:
        parts.append(_line(canvas, unity_segment(box), "#555555", "unity", dash="5 4"))

    for kind, levels in (
        (IsoclineKind.TR, spec.tr_levels),
        (IsoclineKind.NR, spec.nr_levels),
        (IsoclineKind.ACO, spec.aco_levels),
        (IsoclineKind.FIRI_RAY, spec.firi_levels),
    ):
        for level in levels:
            iso = isocline(box, kind, level)
            for seg in iso.segments:
                parts.append(
                    _line(canvas, seg, _ISO_COLORS[kind], f"iso-{kind.value}")
                )

    if spec.show_points:
        for rec in panel:
            e, d = float(rec.equity), float(rec.debt)
            px, py = canvas.to_px(e, d)
            color = REGION_COLORS[classify_point(rec)]
            parts.append(
                f'<circle class="point" cx="{_fmt(px)}" cy="{_fmt(py)}" r="3" '
                f'fill="{color}"/>'
            )

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def render_gasket_svg(tset: TriangleSet, width: int = 640, height: int = 640) -> str:
    """Render a triangle set over the unit square."""
    canvas = _Canvas(width, height, 0.0, 1.0, 0.0, 1.0)
    parts = [_svg_header(width, height)]
    x0, y0 = canvas.to_px(0.0, 1.0)
    x1, y1 = canvas.to_px(1.0, 0.0)
    parts.append(
        f'<rect class="box" x="{_fmt(x0)}" y="{_fmt(y0)}" '
        f'width="{_fmt(x1 - x0)}" height="{_fmt(y1 - y0)}" '
        f'fill="none" stroke="#222222" stroke-width="1"/>'
    )
    parts.extend(_triangle_polygons(tset, canvas, 1.0))
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
