import io
from decimal import Decimal

import pytest
from hypothesis import given
from hypothesis import strategies as st

from irbox.core_model import (
    BalanceSheetRecord,
    CsvSchemaError,
    CsvValidationError,
    DegenerateRecord,
    DuplicateKey,
    IdentityViolation,
    MixedFirms,
    MixedPeriods,
    NegativeDebt,
    NegativeEquityOutsideDistressMode,
    PanelMode,
    PeriodOrderError,
    build_panel,
    infer_mode,
    read_panel_csv,
    read_records_csv,
    validate_record,
)
from irbox.errors import ValidationError


def rec(firm="A", period=1, d=3, e=1, a=None):
    return BalanceSheetRecord(firm, period, d, e, a)


class TestValidateRecord:
    def test_identity_holds_exactly(self):
        validate_record(rec(d=3, e=1, a=4), tol_rel=1e-9)

    def test_identity_violation(self):
        with pytest.raises(IdentityViolation):
            validate_record(rec(d=3, e=1, a=5), tol_rel=1e-9)

    def test_degenerate_all_zero(self):
        with pytest.raises(DegenerateRecord):
            validate_record(rec(d=0, e=0, a=0))

    def test_negative_debt(self):
        with pytest.raises(NegativeDebt):
            validate_record(rec(d=-1, e=3, a=2))

    def test_negative_equity_needs_distress_mode(self):
        r = rec(d=3, e=-1, a=2)
        with pytest.raises(NegativeEquityOutsideDistressMode):
            validate_record(r)
        validate_record(r, distress_mode=True)

    def test_distress_mode_admits_net_negative_totals(self):
        # d + e < 0 is a legitimate distress point; only d + e = 0 is
        # degenerate (it breaks every ratio denominator).
        validate_record(rec(d=1, e=-3, a=-2), distress_mode=True)
        with pytest.raises(DegenerateRecord):
            validate_record(rec(d=1, e=-1, a=0), distress_mode=True)

    def test_identity_tolerance_is_relative(self):
        r = rec(d="1000000000", e="0.5", a="1000000000.51")
        validate_record(r, tol_rel=1e-9)
        with pytest.raises(IdentityViolation):
            validate_record(r, tol_rel=1e-12)

    def test_tolerance_must_be_nonnegative(self):
        with pytest.raises(ValueError):
            validate_record(rec(), tol_rel=-1.0)

    def test_error_names_firm_and_period(self):
        with pytest.raises(DegenerateRecord, match=r"firm 'Z' period 9"):
            validate_record(rec(firm="Z", period=9, d=0, e=0))


class TestRecord:
    def test_assets_synthesized_when_absent(self):
        r = rec(d=3, e=1)
        assert r.assets == Decimal(4)
        assert r.assets_synthesized

    def test_explicit_assets_not_flagged(self):
        r = rec(d=3, e=1, a=4)
        assert not r.assets_synthesized

    def test_float_ingestion_round_trips(self):
        r = rec(d=0.1, e=0.2)
        assert float(r.debt) == 0.1
        assert float(r.equity) == 0.2

    def test_records_are_immutable(self):
        with pytest.raises(AttributeError):
            rec().debt = Decimal(5)


class TestBuildPanel:
    def test_time_series(self):
        rs = [rec("A", t, 1, 1) for t in (1, 2, 3)]
        panel = build_panel(rs, PanelMode.TIME_SERIES)
        assert tuple(panel) == tuple(rs)

    def test_cross_section(self):
        rs = [rec(f, 7, 1, 1) for f in "ABC"]
        panel = build_panel(rs, PanelMode.CROSS_SECTION)
        assert len(panel) == 3

    def test_duplicate_firm_in_cross_section(self):
        rs = [rec(f, 7, 1, 1) for f in "AAB"]
        with pytest.raises(DuplicateKey):
            build_panel(rs, PanelMode.CROSS_SECTION)

    def test_mixed_firms_in_time_series(self):
        rs = [rec("A", 1), rec("B", 2)]
        with pytest.raises(MixedFirms):
            build_panel(rs, PanelMode.TIME_SERIES)

    def test_mixed_periods_in_cross_section(self):
        rs = [rec("A", 1), rec("B", 2)]
        with pytest.raises(MixedPeriods):
            build_panel(rs, PanelMode.CROSS_SECTION)

    def test_duplicate_period_in_time_series(self):
        rs = [rec("A", 1), rec("A", 1)]
        with pytest.raises(DuplicateKey):
            build_panel(rs, PanelMode.TIME_SERIES)

    def test_decreasing_periods_rejected(self):
        rs = [rec("A", 3), rec("A", 1)]
        with pytest.raises(PeriodOrderError):
            build_panel(rs, PanelMode.TIME_SERIES)

    def test_empty_panel_rejected(self):
        with pytest.raises(ValidationError):
            build_panel([], PanelMode.TIME_SERIES)

    @given(st.lists(
        st.tuples(st.integers(1, 50), st.integers(0, 100), st.integers(0, 100)),
        min_size=1, max_size=20,
        unique_by=lambda t: t[0],
    ))
    def test_order_and_content_preserved(self, rows):
        rows = sorted(rows)
        rs = [rec("A", t, d, e + (1 if d + e == 0 else 0)) for t, d, e in rows]
        panel = build_panel(rs, PanelMode.TIME_SERIES)
        assert list(panel.records) == rs


class TestInferMode:
    def test_single_firm_is_time_series(self):
        assert infer_mode([rec("A", 1), rec("A", 2)]) is PanelMode.TIME_SERIES

    def test_single_period_is_cross_section(self):
        assert infer_mode([rec("A", 7), rec("B", 7)]) is PanelMode.CROSS_SECTION

    def test_ambiguous_is_none(self):
        assert infer_mode([rec("A", 1), rec("B", 2)]) is None


GOOD_CSV = """firm_id,period,debt,equity,assets
A,1,3,1,4
A,2,1,1,2
"""


class TestCsvIngestion:
    def test_reads_records(self):
        records = read_records_csv(io.StringIO(GOOD_CSV))
        assert [r.key for r in records] == [("A", 1), ("A", 2)]
        assert records[0].debt == Decimal(3)

    def test_assets_column_optional(self):
        records = read_records_csv(io.StringIO("firm_id,period,debt,equity\nA,1,3,1\n"))
        assert records[0].assets == Decimal(4)
        assert records[0].assets_synthesized

    def test_missing_column_named(self):
        with pytest.raises(CsvSchemaError, match="equity"):
            read_records_csv(io.StringIO("firm_id,period,debt\nA,1,3\n"))

    def test_bad_period_reports_line(self):
        bad = "firm_id,period,debt,equity\nA,1,3,1\nA,x,3,1\n"
        with pytest.raises(CsvSchemaError, match="line 3"):
            read_records_csv(io.StringIO(bad))

    def test_negative_period_rejected(self):
        with pytest.raises(CsvSchemaError, match="negative"):
            read_records_csv(io.StringIO("firm_id,period,debt,equity\nA,-1,3,1\n"))

    def test_bad_decimal_reports_line(self):
        bad = "firm_id,period,debt,equity\nA,1,3,abc\n"
        with pytest.raises(CsvSchemaError, match="line 2"):
            read_records_csv(io.StringIO(bad))

    def test_validation_failures_collected_with_lines(self):
        bad = "firm_id,period,debt,equity,assets\nA,1,3,1,9\nB,1,0,0,0\nC,1,1,1,2\n"
        with pytest.raises(CsvValidationError) as exc:
            read_records_csv(io.StringIO(bad))
        lines = [n for n, _ in exc.value.failures]
        assert lines == [2, 3]

    def test_extra_columns_ignored(self):
        extra = "firm_id,period,debt,equity,assets,firi\nA,1,3,1,4,0.5\n"
        records = read_records_csv(io.StringIO(extra))
        assert records[0].key == ("A", 1)

    def test_empty_file_is_schema_error(self):
        with pytest.raises(CsvSchemaError):
            read_records_csv(io.StringIO(""))

    def test_read_panel_infers_mode(self):
        panel = read_panel_csv(io.StringIO(GOOD_CSV))
        assert panel.mode is PanelMode.TIME_SERIES

    def test_read_panel_ambiguous_requires_mode(self):
        mixed = "firm_id,period,debt,equity\nA,1,3,1\nB,2,3,1\n"
        with pytest.raises(ValidationError, match="ambiguous"):
            read_panel_csv(io.StringIO(mixed))
