"""The risk-box gasket: iterated medial-triangle removal on the unit square.

The unit square splits along its main diagonal into two right isosceles
triangles. One iteration replaces every remaining triangle by its three
corner sub-triangles (the medial triangle is removed). After k steps
2 * 3^k triangles of leg 2^-k remain; the removed area is 1 - (3/4)^k and
the total remaining perimeter is 2 * (3/2)^k * (2 + sqrt(2)), which grows
without bound: finite area, divergent perimeter.

All geometry is exact. Triangle corners live on the dyadic grid of the
current depth, stored as integer (x, y) lattice coordinates in units of
2^-depth, one array per orientation:

- LOWER_RIGHT, below the diagonal: vertices (x, y), (x+1, y), (x+1, y+1);
- UPPER_LEFT, above it: vertices (x, y), (x, y+1), (x+1, y+1).

Both orientations are closed under subdivision, so two int64 arrays
describe any state and a depth-12 state (about 1.06M triangles) stays
cheap. Area bookkeeping uses Fractions; perimeters are kept symbolically
as a rational coefficient q with total perimeter q * (2 + sqrt(2)).
Floating point appears only in render/box-count consumers.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Iterator

import numpy as np

from .errors import LimitError, SchemaError

DEFAULT_DEPTH_CAP = 12

SQRT2 = math.sqrt(2.0)
PERIMETER_RADICAL = 2.0 + SQRT2

_TRIANGLE_LIST_MAGIC = b"IRBXTRI1"


class DepthLimit(LimitError):
    """Iterating would exceed the configured depth cap."""


class Orientation(Enum):
    LOWER_RIGHT = "lower_right"
    UPPER_LEFT = "upper_left"


@dataclass(frozen=True)
class DyadicTriangle:
    """A right isosceles triangle with axis-parallel legs of length
    2^-leg_log2 and exact dyadic-rational vertices.

    Perimeter is (2 + sqrt(2)) times the leg; area is 2^(-2*leg_log2 - 1).
    """

    vertices: tuple[tuple[Fraction, Fraction], ...]
    leg_log2: int
    orientation: Orientation

    @classmethod
    def from_grid(cls, x: int, y: int, depth: int, orientation: Orientation):
        unit = Fraction(1, 2**depth)
        fx, fy = x * unit, y * unit
        if orientation is Orientation.LOWER_RIGHT:
            verts = ((fx, fy), (fx + unit, fy), (fx + unit, fy + unit))
        else:
            verts = ((fx, fy), (fx, fy + unit), (fx + unit, fy + unit))
        return cls(vertices=verts, leg_log2=depth, orientation=orientation)

    @property
    def leg(self) -> Fraction:
        return Fraction(1, 2**self.leg_log2)

    @property
    def area(self) -> Fraction:
        return Fraction(1, 2 ** (2 * self.leg_log2 + 1))

    @property
    def perimeter_coefficient(self) -> Fraction:
        """q such that the perimeter equals q * (2 + sqrt(2))."""
        return self.leg

    @property
    def perimeter(self) -> float:
        return float(self.leg) * PERIMETER_RADICAL

    def contains(self, px: Fraction, py: Fraction) -> bool:
        """Closed-set membership test."""
        (x0, y0) = self.vertices[0]
        unit = self.leg
        if not (x0 <= px <= x0 + unit and y0 <= py <= y0 + unit):
            return False
        if self.orientation is Orientation.LOWER_RIGHT:
            return py - y0 <= px - x0
        return py - y0 >= px - x0


def _frozen(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.int64)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class TriangleSet:
    """A depth plus the lattice corners of each orientation's triangles.

    ``lr_corners`` and ``ul_corners`` are read-only (n, 2) int64 arrays of
    bounding-cell minima in units of 2^-depth.
    """

    depth: int
    lr_corners: np.ndarray
    ul_corners: np.ndarray

    @property
    def remaining_count(self) -> int:
        return len(self.lr_corners) + len(self.ul_corners)

    def triangles(self) -> Iterator[DyadicTriangle]:
        """Materialize exact triangles; lazy because deep states are large."""
        for x, y in self.lr_corners:
            yield DyadicTriangle.from_grid(int(x), int(y), self.depth, Orientation.LOWER_RIGHT)
        for x, y in self.ul_corners:
            yield DyadicTriangle.from_grid(int(x), int(y), self.depth, Orientation.UPPER_LEFT)

    def contains_point(self, px: Fraction, py: Fraction) -> bool:
        """Exact closed-set membership of a point in the remaining union."""
        scale = 2**self.depth
        sx, sy = px * scale, py * scale
        # Candidate cells: the up-to-four lattice cells whose closed square
        # contains the point.
        xs = {min(max(int(math.floor(sx)), 0), scale - 1)}
        ys = {min(max(int(math.floor(sy)), 0), scale - 1)}
        if sx == int(sx) and 0 < int(sx):
            xs.add(min(int(sx) - 1, scale - 1))
        if sy == int(sy) and 0 < int(sy):
            ys.add(min(int(sy) - 1, scale - 1))
        lr = {(int(x), int(y)) for x, y in self.lr_corners}
        ul = {(int(x), int(y)) for x, y in self.ul_corners}
        for cx in xs:
            for cy in ys:
                if (cx, cy) in lr and sy - cy <= sx - cx:
                    return True
                if (cx, cy) in ul and sy - cy >= sx - cx:
                    return True
        return False


@dataclass(frozen=True, eq=False)
class GasketState(TriangleSet):
    """A triangle set plus exact removal accounting."""

    removed_count_total: int
    area_removed: Fraction
    perimeter_coefficient: Fraction

    @property
    def area_remaining(self) -> Fraction:
        return 1 - self.area_removed

    @property
    def perimeter_value(self) -> float:
        return float(self.perimeter_coefficient) * PERIMETER_RADICAL


def initial_state() -> GasketState:
    """Depth 0: the unit square as two unit-leg triangles astride the
    diagonal; nothing removed yet, total perimeter 2 * (2 + sqrt(2))."""
    corner = np.zeros((1, 2), dtype=np.int64)
    return GasketState(
        depth=0,
        lr_corners=_frozen(corner),
        ul_corners=_frozen(corner.copy()),
        removed_count_total=0,
        area_removed=Fraction(0),
        perimeter_coefficient=Fraction(2),
    )


def iterate(state: GasketState, depth_cap: int = DEFAULT_DEPTH_CAP) -> GasketState:
    """One subdivision step: each triangle yields its three corner children.

    Corner arithmetic doubles the lattice and offsets per orientation, so
    coordinates remain exact integers. Raises DepthLimit instead of
    exceeding ``depth_cap`` (2 * 3^cap triangles is the memory budget).
    """
    if state.depth >= depth_cap:
        raise DepthLimit(
            f"depth {state.depth + 1} exceeds cap {depth_cap} "
            f"({2 * 3 ** (state.depth + 1)} triangles)"
        )
    new_depth = state.depth + 1
    lr2 = 2 * state.lr_corners
    ul2 = 2 * state.ul_corners
    new_lr = np.concatenate([lr2, lr2 + (1, 0), lr2 + (1, 1)])
    new_ul = np.concatenate([ul2, ul2 + (0, 1), ul2 + (1, 1)])
    removed = state.remaining_count
    # Each removed medial triangle has leg 2^-new_depth.
    medial_area = Fraction(1, 2 ** (2 * new_depth + 1))
    return GasketState(
        depth=new_depth,
        lr_corners=_frozen(new_lr),
        ul_corners=_frozen(new_ul),
        removed_count_total=state.removed_count_total + removed,
        area_removed=state.area_removed + removed * medial_area,
        perimeter_coefficient=state.perimeter_coefficient * Fraction(3, 2),
    )


def gasket_at_depth(depth: int, depth_cap: int = DEFAULT_DEPTH_CAP) -> GasketState:
    """Iterate from the unit square down to ``depth``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    state = initial_state()
    for _ in range(depth):
        state = iterate(state, depth_cap=depth_cap)
    return state


def closed_form_area_removed(k: int) -> Fraction:
    """Exact removed area after k iterations: 1 - (3/4)^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 1 - Fraction(3, 4) ** k


def closed_form_perimeter(k: int) -> Fraction:
    """Coefficient q of the total remaining perimeter q * (2 + sqrt(2))
    after k iterations: q = 2 * (3/2)^k.

    This is the direct count, 2 * 3^k triangles times a per-triangle
    perimeter of (2 + sqrt(2)) / 2^k, and it is what exact enumeration of
    the states confirms. Note that telescoping the per-step additions as a
    geometric series with first term 3/2 gives 3 * ((3/2)^k - 1), which
    disagrees with the direct count at every k >= 1; both expressions
    diverge, so the finite-area/infinite-perimeter conclusion is unaffected,
    but only the direct count matches the constructed states.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    return 2 * Fraction(3, 2) ** k


def perimeter_divergence_depth(bound: float) -> int:
    """Smallest k at which the total perimeter exceeds ``bound``."""
    if bound <= 0:
        return 0
    k = 0
    while float(closed_form_perimeter(k)) * PERIMETER_RADICAL <= bound:
        k += 1
    return k


def write_triangle_list(tset: TriangleSet, path: str | Path) -> None:
    """Serialize to the binary triangle-list format.

    Layout: 8-byte magic, uint64 little-endian triangle count, then per
    triangle nine int64 little-endian words: leg_log2, the bounding-cell
    minimum corner and the right-angle corner, each coordinate as a
    (numerator, exponent) pair meaning numerator / 2^exponent.
    """
    depth = tset.depth
    rows: list[np.ndarray] = []
    for corners, orient in ((tset.lr_corners, Orientation.LOWER_RIGHT),
                            (tset.ul_corners, Orientation.UPPER_LEFT)):
        if len(corners) == 0:
            continue
        n = len(corners)
        rec = np.empty((n, 9), dtype="<i8")
        rec[:, 0] = depth
        rec[:, 1] = corners[:, 0]
        rec[:, 2] = depth
        rec[:, 3] = corners[:, 1]
        rec[:, 4] = depth
        if orient is Orientation.LOWER_RIGHT:
            rec[:, 5] = corners[:, 0] + 1
            rec[:, 7] = corners[:, 1]
        else:
            rec[:, 5] = corners[:, 0]
            rec[:, 7] = corners[:, 1] + 1
        rec[:, 6] = depth
        rec[:, 8] = depth
        rows.append(rec)
    payload = np.concatenate(rows) if rows else np.empty((0, 9), dtype="<i8")
    with open(path, "wb") as fh:
        fh.write(_TRIANGLE_LIST_MAGIC)
        fh.write(struct.pack("<Q", len(payload)))
        fh.write(payload.tobytes())


def read_triangle_list(path: str | Path) -> TriangleSet:
    """Deserialize a binary triangle list written by write_triangle_list."""
    raw = Path(path).read_bytes()
    if raw[:8] != _TRIANGLE_LIST_MAGIC:
        raise SchemaError(f"{path}: not a triangle-list file")
    (count,) = struct.unpack("<Q", raw[8:16])
    body = np.frombuffer(raw[16:], dtype="<i8")
    if body.size != count * 9:
        raise SchemaError(f"{path}: truncated triangle list")
    rec = body.reshape(count, 9)
    if count == 0:
        empty = np.empty((0, 2), dtype=np.int64)
        return TriangleSet(depth=0, lr_corners=_frozen(empty), ul_corners=_frozen(empty))
    depths = np.unique(rec[:, [0, 2, 4, 6, 8]])
    if len(depths) != 1:
        raise SchemaError(f"{path}: mixed triangle scales are not supported")
    depth = int(depths[0])
    bx, by = rec[:, 1], rec[:, 3]
    rx, ry = rec[:, 5], rec[:, 7]
    is_lr = (rx == bx + 1) & (ry == by)
    is_ul = (rx == bx) & (ry == by + 1)
    if not np.all(is_lr | is_ul):
        raise SchemaError(f"{path}: right-angle corner inconsistent with cell corner")
    lr = np.stack([bx[is_lr], by[is_lr]], axis=1)
    ul = np.stack([bx[is_ul], by[is_ul]], axis=1)
    return TriangleSet(depth=depth, lr_corners=_frozen(lr), ul_corners=_frozen(ul))
