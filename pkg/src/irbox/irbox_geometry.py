"""The insolvency risk box: the bounding square in (equity, debt) space,
its isoclines, point classification, and insolvency probability.

Coordinates follow the plotting convention (horizontal = equity,
vertical = debt). The box side is the strict maximum of debt and equity
over the panel; a distress panel may extend the equity axis below zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .core_model import BalanceSheetRecord, Panel
from .errors import ValidationError

Point = tuple[float, float]
Segment = tuple[Point, Point]


class OutOfRange(ValidationError):
    """An isocline level outside its admissible interval."""


class NoDebtPositiveRecords(ValidationError):
    """Empirical conditioning set (debt > 0) is empty."""


class NoDistressExtension(ValidationError):
    """Geometric probability needs a box extending below zero equity."""


class RegionLabel(Enum):
    ABOVE_UNITY = "above_unity"     # d > e: equity deficit
    ON_UNITY = "on_unity"           # d = e: balanced financing
    BELOW_UNITY = "below_unity"     # e > d: equity surplus
    DISTRESS = "distress"           # e <= 0


class IsoclineKind(Enum):
    TR = "tr"
    NR = "nr"
    ACO = "aco"
    FIRI_RAY = "firi"


@dataclass(frozen=True)
class IRBox:
    """Square [0, side]^2 in (e, d), optionally extended to e_min < 0."""

    side: float
    e_min: float = 0.0

    @property
    def area(self) -> float:
        return self.side * self.side

    @property
    def origin(self) -> Point:
        return (0.0, 0.0)

    @property
    def distress_extension(self) -> float | None:
        return self.e_min if self.e_min < 0 else None

    def contains(self, e: float, d: float) -> bool:
        return self.e_min <= e <= self.side and 0.0 <= d <= self.side


@dataclass(frozen=True)
class IsoclineSpec:
    """Level set of one index, clipped to the box, as line segments."""

    kind: IsoclineKind
    level: float
    segments: tuple[Segment, ...]


def build_irbox(panel: Panel) -> IRBox:
    """Box side = max over the panel of max(debt, equity); the equity axis
    extends to the most negative equity when the panel is in distress mode."""
    side = 0.0
    e_min = 0.0
    for rec in panel:
        d = float(rec.debt)
        e = float(rec.equity)
        side = max(side, d, e)
        if panel.distress_mode:
            e_min = min(e_min, e)
    return IRBox(side=side, e_min=e_min)


def firi_ray_slopes(c: float) -> tuple[float, float]:
    """Slopes (d over e) of the two rays through the origin on which the
    risk index equals ``c``.

    Returns (c/(2-c), (2-c)/c); the two slopes multiply to 1, reflecting
    the rays' mirror symmetry about the d = e line. c = 1 collapses both
    onto the unity line; as c -> 0 the rays hug the axes.
    """
    if not 0.0 < c <= 1.0:
        raise OutOfRange(f"ray level must lie in (0, 1], got {c}")
    return (c / (2.0 - c), (2.0 - c) / c)


def classify(d: float, e: float) -> RegionLabel:
    """Region of a raw (debt, equity) pair; distress takes precedence."""
    if e <= 0:
        return RegionLabel.DISTRESS
    if d > e:
        return RegionLabel.ABOVE_UNITY
    if d < e:
        return RegionLabel.BELOW_UNITY
    return RegionLabel.ON_UNITY


def classify_point(rec: BalanceSheetRecord) -> RegionLabel:
    """Region of a record in the box."""
    return classify(float(rec.debt), float(rec.equity))


def unity_segment(box: IRBox) -> Segment:
    """The d = e diagonal across the box."""
    return ((0.0, 0.0), (box.side, box.side))


def isocline(box: IRBox, kind: IsoclineKind, level: float) -> IsoclineSpec:
    """Construct the level set of one index inside [0, side]^2.

    TR level c: the slope -1 segment d + e = c, admissible for
    0 < c <= 2*side. NR level c: the two slope +1 segments |d - e| = c
    (a single diagonal at c = 0), admissible for 0 <= c <= side.
    ACO level c: the L through (c/2, c/2) parallel to the axes,
    admissible for 0 <= c <= 2*side. Ray level c in (0, 1]: the pair of
    origin rays from firi_ray_slopes, deduplicated at c = 1.
    """
    s = box.side
    segs: list[Segment] = []
    if kind is IsoclineKind.TR:
        if not 0.0 < level <= 2.0 * s:
            raise OutOfRange(f"TR level must lie in (0, {2.0 * s}], got {level}")
        e0 = max(0.0, level - s)
        e1 = min(s, level)
        segs.append(((e0, level - e0), (e1, level - e1)))
    elif kind is IsoclineKind.NR:
        if not 0.0 <= level <= s:
            raise OutOfRange(f"NR level must lie in [0, {s}], got {level}")
        if level == 0.0:
            segs.append(unity_segment(box))
        else:
            segs.append(((0.0, level), (s - level, s)))   # d = e + c
            segs.append(((level, 0.0), (s, s - level)))   # d = e - c
    elif kind is IsoclineKind.ACO:
        if not 0.0 <= level <= 2.0 * s:
            raise OutOfRange(f"ACO level must lie in [0, {2.0 * s}], got {level}")
        h = level / 2.0
        segs.append(((h, h), (s, h)))  # d = c/2 for e >= c/2
        segs.append(((h, h), (h, s)))  # e = c/2 for d >= c/2
    elif kind is IsoclineKind.FIRI_RAY:
        lo, hi = firi_ray_slopes(level)
        for slope in dict.fromkeys((lo, hi)):  # dedupe the c = 1 collapse
            if slope <= 1.0:
                segs.append(((0.0, 0.0), (s, slope * s)))
            else:
                segs.append(((0.0, 0.0), (s / slope, s)))
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown isocline kind {kind!r}")
    return IsoclineSpec(kind=kind, level=level, segments=tuple(segs))


class ProbabilityMethod(Enum):
    EMPIRICAL = "empirical"
    UNIFORM_GEOMETRIC = "geometric"


def geometric_distress_fraction(box: IRBox) -> float:
    """Share of the distress-extended box with e <= 0 under the uniform
    measure over [e_min, side] x (0, side]."""
    if box.e_min >= 0:
        raise NoDistressExtension("box has no negative-equity extension")
    return -box.e_min / (box.side - box.e_min)


def insolvency_probability(panel: Panel, method: ProbabilityMethod) -> float:
    """Estimate P(e <= 0 | d > 0) for a panel.

    Empirical: the share of debt-positive records with nonpositive equity.
    UniformGeometric: the area share of the panel's distress-extended box
    with e <= 0 (the minimal-assumption uniform measure; the choice of
    measure is surfaced in reports, not asserted as canonical).
    """
    if method is ProbabilityMethod.EMPIRICAL:
        debt_positive = 0
        distressed = 0
        for rec in panel:
            if float(rec.debt) > 0:
                debt_positive += 1
                if float(rec.equity) <= 0:
                    distressed += 1
        if debt_positive == 0:
            raise NoDebtPositiveRecords("no records with debt > 0")
        return distressed / debt_positive
    if method is ProbabilityMethod.UNIFORM_GEOMETRIC:
        return geometric_distress_fraction(build_irbox(panel))
    raise ValueError(f"unknown probability method {method!r}")  # pragma: no cover
