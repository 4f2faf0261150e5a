"""Box-counting dimension estimation over gasket states and point sets.

Counting is exact, not rasterized: the dyadic grid at scale m has cell
boundaries on the same lattice as the triangle vertices, so occupancy
reduces to integer comparisons. Boundary cells are where box-counting
conventions diverge, so the convention is fixed explicitly: a cell is
occupied iff its intersection with the remaining set has positive area.
Cells meeting the set only along an edge or at a vertex are not counted;
with that convention every triangle occupies exactly the one grid cell
containing its bounding lattice cell. (Point sets carry no area, so
box_count_points falls back to closed-cell membership.)

The dimension is the least-squares slope of log N(m) against log 2^m
over a window of scales, rather than a two-point ratio; the default
window drops the coarsest scales (m <= 2) and the construction scale
(m = depth), both of which bias the slope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .fractal_gasket import TriangleSet


class ScaleFinerThanDepth(ValidationError):
    """Counts at scales finer than the construction depth reflect the
    depth-limited prefractal, not the limit set."""


class InsufficientScales(ValidationError):
    """A slope needs at least three scales."""


@dataclass(frozen=True)
class BoxCountFit:
    """Box-count samples and the fitted log-log slope."""

    samples: tuple[tuple[int, int], ...]
    dimension: float
    fit_quality: float
    scale_window: tuple[int, int]


def _is_full_square(tset: TriangleSet) -> bool:
    # The depth-0 two-triangle state is the whole unit square: its counts
    # are exact at every scale, so the depth gate does not apply.
    return (
        tset.depth == 0
        and len(tset.lr_corners) == 1
        and len(tset.ul_corners) == 1
    )


def box_count(tset: TriangleSet, m: int) -> int:
    """Number of cells of the 2^m x 2^m dyadic grid over the unit square
    whose intersection with the remaining set has positive area.

    Exact for 0 <= m <= depth: a triangle's bounding lattice cell nests
    inside a single grid cell, so each triangle marks exactly one cell.
    The full-square depth-0 state is counted at any scale (every cell
    overlaps the square). Grid memory is 4^m bits.
    """
    if m < 0:
        raise ValueError("scale exponent must be nonnegative")
    if _is_full_square(tset):
        return 4**m
    if m > tset.depth:
        raise ScaleFinerThanDepth(
            f"scale m={m} is finer than construction depth {tset.depth}"
        )
    ncells = 2**m
    s = 2 ** (tset.depth - m)  # grid-cell side in lattice units
    grid = np.zeros((ncells, ncells), dtype=bool)
    for corners in (tset.lr_corners, tset.ul_corners):
        if len(corners):
            grid[corners[:, 0] // s, corners[:, 1] // s] = True
    return int(grid.sum())


def box_count_points(points, m: int) -> int:
    """Occupied-cell count for a finite point set in [0, 1]^2.

    A point on a grid line belongs to every closed cell touching it, so
    it can occupy two cells (four at a grid corner).
    """
    if m < 0:
        raise ValueError("scale exponent must be nonnegative")
    ncells = 2**m
    occupied: set[tuple[int, int]] = set()
    for px, py in np.asarray(points, dtype=float).reshape(-1, 2):
        if not (0.0 <= px <= 1.0 and 0.0 <= py <= 1.0):
            raise ValueError(f"point ({px}, {py}) outside the unit square")
        cells_x = _touching_indices(px * ncells, ncells)
        cells_y = _touching_indices(py * ncells, ncells)
        for i in cells_x:
            for j in cells_y:
                occupied.add((i, j))
    return len(occupied)


def _touching_indices(t: float, ncells: int) -> tuple[int, ...]:
    i = min(int(math.floor(t)), ncells - 1)
    if t == int(t) and 0 < int(t) <= ncells - 1:
        return (int(t) - 1, int(t))
    return (i,)


def box_counts(tset: TriangleSet, window: tuple[int, int]) -> list[tuple[int, int]]:
    """(m, N(m)) samples over an inclusive window of scale exponents."""
    m_min, m_max = window
    return [(m, box_count(tset, m)) for m in range(m_min, m_max + 1)]


def fit_loglog(samples) -> tuple[float, float]:
    """Least-squares slope and R^2 of log N against log 2^m.

    Constant counts fit a flat line exactly: slope 0, quality 1.
    """
    pts = list(samples)
    if len(pts) < 3:
        raise InsufficientScales(f"need at least 3 scales, got {len(pts)}")
    x = np.array([m for m, _ in pts], dtype=float) * math.log(2.0)
    y = np.log([n for _, n in pts])
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        return float(slope), 1.0
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), r2


def default_window(tset: TriangleSet) -> tuple[int, int]:
    """Drop m <= 2 (coarse bias) and m = depth (depth-limited); the full
    square has no depth limit so it gets a fixed small window."""
    if _is_full_square(tset):
        return (1, 4)
    return (3, tset.depth - 1)


def fit_dimension(tset: TriangleSet, window: tuple[int, int] | None = None) -> BoxCountFit:
    """Box-count over a scale window and fit the dimension.

    The window must hold at least three scales and stay within the
    construction depth (full-square depth-0 states excepted).
    """
    if window is None:
        window = default_window(tset)
    m_min, m_max = window
    if m_min < 0:
        raise ValueError("window start must be nonnegative")
    if m_max - m_min < 2:
        raise InsufficientScales(
            f"window {window} holds {max(m_max - m_min + 1, 0)} scales; need >= 3"
        )
    if m_max > tset.depth and not _is_full_square(tset):
        raise ScaleFinerThanDepth(
            f"window {window} exceeds construction depth {tset.depth}"
        )
    samples = box_counts(tset, window)
    slope, r2 = fit_loglog(samples)
    return BoxCountFit(
        samples=tuple(samples),
        dimension=slope,
        fit_quality=r2,
        scale_window=(m_min, m_max),
    )
