"""The insolvency risk index family over (debt, equity) observations.

All ratios are evaluated in forms that avoid subtractive cancellation:
the overlap is 2*min(d, e) rather than (d + e) - |d - e|, and the
directional ratios divide first. This keeps every index within a few
ulps of its exact rational value even at extreme debt/equity ratios.

Nominal ranges (firi in [0, 1], the directional forms in [0, 2]) hold for
nonnegative debt and equity; distress-mode records with negative equity
produce values outside those ranges and are reported as computed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .core_model import BalanceSheetRecord, DegenerateRecord, Panel
from .errors import ValidationError


class ZeroAssets(ValidationError):
    """The at-risk fraction needs strictly positive assets."""


def total_risk(d: float, e: float) -> float:
    """TR = d + e: debt and equity both count toward exposure."""
    return d + e


def net_risk(d: float, e: float) -> float:
    """NR = |d - e|: the gap between debt and equity financing."""
    return abs(d - e)


def asset_capital_overlap(d: float, e: float) -> float:
    """ACO = TR - NR, evaluated as 2*min(d, e)."""
    return 2.0 * min(d, e)


def firi(d: float, e: float) -> float:
    """Insolvency risk index ACO/TR = 2*min(d, e) / (d + e).

    1 at perfect debt/equity balance, 0 when either source is absent.
    Caller guarantees d + e != 0.
    """
    return 2.0 * min(d, e) / (d + e)


def firi_h(d: float, e: float) -> float:
    """Horizontal component 1 - (d - e)/(d + e) = 2e/(d + e)."""
    return 2.0 * e / (d + e)


def firi_v(d: float, e: float) -> float:
    """Vertical component 1 + (d - e)/(d + e) = 2d/(d + e)."""
    return 2.0 * d / (d + e)


def gearing(d: float, e: float) -> float | None:
    """Gearing ratio d/e; None when equity is zero (kept finite in reports)."""
    if e == 0:
        return None
    return d / e


def pi_fraction(a: float, d: float, e: float) -> float:
    """Fraction of assets at risk: (a - (e - d)) / a.

    Equals firi_v when a = d + e. Not clamped: values above 1 signal an
    equity deficit. Requires a > 0.
    """
    if a <= 0:
        raise ZeroAssets(f"assets must be positive, got {a}")
    return (a - (e - d)) / a


@dataclass(frozen=True)
class RiskIndexSet:
    """All derived indices for one observation. gear is None when e = 0."""

    tr: float
    nr: float
    aco: float
    firi: float
    firi_h: float
    firi_v: float
    gear: float | None
    pi: float

    def as_dict(self) -> dict[str, float | str]:
        """Serializable view; undefined gearing becomes the string marker."""
        return {
            "tr": self.tr,
            "nr": self.nr,
            "aco": self.aco,
            "firi": self.firi,
            "firi_h": self.firi_h,
            "firi_v": self.firi_v,
            "gear": "undefined" if self.gear is None else self.gear,
            "pi": self.pi,
        }


def compute_indices(rec: BalanceSheetRecord) -> RiskIndexSet:
    """Evaluate the full index family for one validated record.

    Requires debt + equity > 0; distress records at or below that line
    have no defined ratios and raise DegenerateRecord.
    """
    d = float(rec.debt)
    e = float(rec.equity)
    tr = total_risk(d, e)
    if tr <= 0:
        raise DegenerateRecord(
            f"firm {rec.firm_id!r} period {rec.period}: "
            f"debt + equity = {tr} is not positive"
        )
    return RiskIndexSet(
        tr=tr,
        nr=net_risk(d, e),
        aco=asset_capital_overlap(d, e),
        firi=firi(d, e),
        firi_h=firi_h(d, e),
        firi_v=firi_v(d, e),
        gear=gearing(d, e),
        pi=pi_fraction(tr, d, e),
    )


def score_panel(panel: Panel) -> list[tuple[tuple[str, int], RiskIndexSet]]:
    """Compute indices for every record, preserving input order.

    A degenerate record aborts scoring with its key named.
    """
    out: list[tuple[tuple[str, int], RiskIndexSet]] = []
    for rec in panel.records:
        try:
            out.append((rec.key, compute_indices(rec)))
        except DegenerateRecord as err:
            raise DegenerateRecord(f"cannot score {rec.key}: {err}") from err
    return out
