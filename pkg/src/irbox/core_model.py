"""Balance-sheet observations and panels.

A record is one firm-period observation of debt, equity and assets.
Monetary fields are carried as exact decimals so the accounting identity
(assets = debt + equity) can be checked without binary rounding noise;
index math downstream converts to float once, at the point of use.

Records and panels are frozen dataclasses: safe to share across threads,
never mutated after construction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import IO, Iterable, Iterator, Sequence

from .errors import SchemaError, ValidationError

DEFAULT_IDENTITY_TOL = 1e-9

REQUIRED_COLUMNS = ("firm_id", "period", "debt", "equity")
OPTIONAL_COLUMNS = ("assets",)


class IdentityViolation(ValidationError):
    """assets differs from debt + equity beyond tolerance."""


class NegativeDebt(ValidationError):
    """debt < 0 is never admissible."""


class NegativeEquityOutsideDistressMode(ValidationError):
    """equity < 0 requires a distress-mode panel."""


class DegenerateRecord(ValidationError):
    """debt + equity is zero (or nonpositive where a ratio needs it)."""


class MixedFirms(ValidationError):
    """A time-series panel contains more than one firm."""


class MixedPeriods(ValidationError):
    """A cross-section panel contains more than one period."""


class DuplicateKey(ValidationError):
    """Two records share the panel's key axis."""


class PeriodOrderError(ValidationError):
    """Time-series periods must be strictly increasing."""


class CsvSchemaError(SchemaError):
    """CSV header or cell cannot be parsed against the ingestion schema."""


class CsvValidationError(ValidationError):
    """One or more CSV rows parsed but failed record validation."""

    def __init__(self, failures: Sequence[tuple[int, str]]):
        self.failures = list(failures)
        detail = "; ".join(f"line {n}: {msg}" for n, msg in self.failures)
        super().__init__(f"{len(self.failures)} row(s) failed validation: {detail}")


class PanelMode(Enum):
    TIME_SERIES = "timeseries"
    CROSS_SECTION = "crosssection"


def _to_decimal(value) -> Decimal:
    """Coerce int/float/str/Decimal to Decimal without binary artifacts.

    Floats go through repr(), which is the shortest decimal string that
    round-trips to the same float, so float -> Decimal -> float is exact.
    """
    if isinstance(value, Decimal):
        return value
    if isinstance(value, float):
        return Decimal(repr(value))
    return Decimal(value)


@dataclass(frozen=True)
class BalanceSheetRecord:
    """One firm-period observation.

    ``assets`` may be omitted; it is then synthesized as debt + equity and
    the record is flagged so reports can distinguish observed from derived
    totals.
    """

    firm_id: str
    period: int
    debt: Decimal
    equity: Decimal
    assets: Decimal | None = None
    assets_synthesized: bool = False

    def __post_init__(self):
        object.__setattr__(self, "debt", _to_decimal(self.debt))
        object.__setattr__(self, "equity", _to_decimal(self.equity))
        if self.assets is None:
            object.__setattr__(self, "assets", self.debt + self.equity)
            object.__setattr__(self, "assets_synthesized", True)
        else:
            object.__setattr__(self, "assets", _to_decimal(self.assets))

    @property
    def key(self) -> tuple[str, int]:
        return (self.firm_id, self.period)


def validate_record(
    rec: BalanceSheetRecord,
    tol_rel: float = DEFAULT_IDENTITY_TOL,
    distress_mode: bool = False,
) -> None:
    """Check record invariants, raising the first violated one.

    - debt must be nonnegative;
    - equity must be nonnegative unless ``distress_mode`` admits it;
    - debt + equity must not be exactly zero (ratio denominators);
    - assets must equal debt + equity within ``tol_rel * max(1, assets)``.

    In distress mode, debt + equity < 0 is accepted here: such points are
    legitimate members of a distress-extended panel even though the ratio
    indices are undefined on them (those operations reject separately).
    """
    if tol_rel < 0:
        raise ValueError("tol_rel must be nonnegative")
    where = f"firm {rec.firm_id!r} period {rec.period}"
    if rec.debt < 0:
        raise NegativeDebt(f"{where}: debt {rec.debt} < 0")
    if rec.equity < 0 and not distress_mode:
        raise NegativeEquityOutsideDistressMode(
            f"{where}: equity {rec.equity} < 0 outside distress mode"
        )
    total = rec.debt + rec.equity
    if total == 0:
        raise DegenerateRecord(f"{where}: debt + equity = 0")
    tol = _to_decimal(tol_rel) * max(Decimal(1), rec.assets)
    if abs(rec.assets - total) > tol:
        raise IdentityViolation(
            f"{where}: assets {rec.assets} != debt + equity {total} "
            f"(tolerance {tol})"
        )


@dataclass(frozen=True)
class Panel:
    """An ordered, validated collection of records on one analysis axis."""

    records: tuple[BalanceSheetRecord, ...]
    mode: PanelMode
    distress_mode: bool = False

    def __iter__(self) -> Iterator[BalanceSheetRecord]:
        return iter(self.records)

    def __len__(self) -> int:
        return len(self.records)


def build_panel(
    records: Iterable[BalanceSheetRecord],
    mode: PanelMode,
    distress_mode: bool = False,
    tol_rel: float = DEFAULT_IDENTITY_TOL,
) -> Panel:
    """Validate records and their panel-axis invariants; preserve order.

    Time series: one firm, strictly increasing periods. Cross section:
    one period, distinct firms.
    """
    recs = tuple(records)
    if not recs:
        raise ValidationError("a panel requires at least one record")
    for rec in recs:
        validate_record(rec, tol_rel=tol_rel, distress_mode=distress_mode)

    if mode is PanelMode.TIME_SERIES:
        firms = {r.firm_id for r in recs}
        if len(firms) > 1:
            raise MixedFirms(f"time-series panel spans firms {sorted(firms)}")
        for prev, cur in zip(recs, recs[1:]):
            if cur.period == prev.period:
                raise DuplicateKey(
                    f"firm {cur.firm_id!r}: period {cur.period} repeated"
                )
            if cur.period < prev.period:
                raise PeriodOrderError(
                    f"firm {cur.firm_id!r}: period {cur.period} after {prev.period}"
                )
    elif mode is PanelMode.CROSS_SECTION:
        periods = {r.period for r in recs}
        if len(periods) > 1:
            raise MixedPeriods(f"cross-section panel spans periods {sorted(periods)}")
        seen: set[str] = set()
        for rec in recs:
            if rec.firm_id in seen:
                raise DuplicateKey(f"firm {rec.firm_id!r} repeated in cross section")
            seen.add(rec.firm_id)
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unknown panel mode {mode!r}")
    return Panel(recs, mode, distress_mode)


def infer_mode(records: Sequence[BalanceSheetRecord]) -> PanelMode | None:
    """Guess the panel axis: one firm -> time series, one period -> cross
    section, otherwise None (ambiguous)."""
    if not records:
        return None
    if len({r.firm_id for r in records}) == 1:
        return PanelMode.TIME_SERIES
    if len({r.period for r in records}) == 1:
        return PanelMode.CROSS_SECTION
    return None


def read_records_csv(
    source: str | Path | IO[str],
    distress_mode: bool = False,
    tol_rel: float = DEFAULT_IDENTITY_TOL,
) -> list[BalanceSheetRecord]:
    """Ingest records from CSV.

    Schema (header required): firm_id,period,debt,equity[,assets].
    Extra columns are ignored, so index reports emitted by this package
    re-ingest directly. Decimals use '.' as the radix point; period is a
    nonnegative integer; encoding is UTF-8.

    Raises CsvSchemaError on the first malformed header or cell (with its
    line number), CsvValidationError listing every row that parsed but
    failed record validation.
    """
    if isinstance(source, (str, Path)):
        with open(source, "r", encoding="utf-8", newline="") as fh:
            return read_records_csv(fh, distress_mode=distress_mode, tol_rel=tol_rel)

    reader = csv.DictReader(source)
    if reader.fieldnames is None:
        raise CsvSchemaError("empty CSV: header row required")
    missing = [c for c in REQUIRED_COLUMNS if c not in reader.fieldnames]
    if missing:
        raise CsvSchemaError(f"missing required column(s): {', '.join(missing)}")
    has_assets = "assets" in reader.fieldnames

    records: list[BalanceSheetRecord] = []
    failures: list[tuple[int, str]] = []
    for lineno, row in enumerate(reader, start=2):
        firm_id = (row.get("firm_id") or "").strip()
        if not firm_id:
            raise CsvSchemaError(f"line {lineno}: empty firm_id")
        try:
            period = int(row["period"])
        except (TypeError, ValueError):
            raise CsvSchemaError(
                f"line {lineno}: period {row.get('period')!r} is not an integer"
            ) from None
        if period < 0:
            raise CsvSchemaError(f"line {lineno}: period {period} is negative")
        try:
            debt = Decimal(row["debt"])
            equity = Decimal(row["equity"])
            raw_assets = (row.get("assets") or "").strip() if has_assets else ""
            assets = Decimal(raw_assets) if raw_assets else None
        except (InvalidOperation, TypeError):
            raise CsvSchemaError(
                f"line {lineno}: unparseable decimal in debt/equity/assets"
            ) from None
        rec = BalanceSheetRecord(firm_id, period, debt, equity, assets)
        try:
            validate_record(rec, tol_rel=tol_rel, distress_mode=distress_mode)
        except ValidationError as err:
            failures.append((lineno, str(err)))
            continue
        records.append(rec)
    if failures:
        raise CsvValidationError(failures)
    return records


def read_panel_csv(
    source: str | Path | IO[str],
    mode: PanelMode | None = None,
    distress_mode: bool = False,
    tol_rel: float = DEFAULT_IDENTITY_TOL,
) -> Panel:
    """Ingest a CSV and build a panel, inferring the axis when not given."""
    records = read_records_csv(source, distress_mode=distress_mode, tol_rel=tol_rel)
    if mode is None:
        mode = infer_mode(records)
        if mode is None:
            raise ValidationError(
                "panel axis is ambiguous (several firms and several periods); "
                "pass the mode explicitly"
            )
    return build_panel(records, mode, distress_mode=distress_mode, tol_rel=tol_rel)
