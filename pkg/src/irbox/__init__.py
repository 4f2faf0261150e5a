"""Insolvency risk indices over balance-sheet panels, the bounding risk
box in (equity, debt) space, and its exactly constructed fractal gasket
with a box-counting dimension estimator."""

from .core_model import (
    BalanceSheetRecord,
    Panel,
    PanelMode,
    build_panel,
    read_panel_csv,
    read_records_csv,
    validate_record,
)
from .economy_model import (
    EconomyParams,
    FirmChoice,
    WelfareReport,
    expected_payoff,
    optimize_firm,
    utility,
    welfare,
)
from .errors import IrboxError, LimitError, SchemaError, ValidationError
from .fractal_dimension import BoxCountFit, box_count, box_count_points, fit_dimension
from .fractal_gasket import (
    DyadicTriangle,
    GasketState,
    TriangleSet,
    closed_form_area_removed,
    closed_form_perimeter,
    gasket_at_depth,
    initial_state,
    iterate,
)
from .irbox_geometry import (
    IRBox,
    IsoclineKind,
    IsoclineSpec,
    ProbabilityMethod,
    RegionLabel,
    build_irbox,
    classify_point,
    firi_ray_slopes,
    insolvency_probability,
    isocline,
)
from .risk_indices import RiskIndexSet, compute_indices, pi_fraction, score_panel

__version__ = "0.1.0"

__all__ = [
    "BalanceSheetRecord",
    "BoxCountFit",
    "DyadicTriangle",
    "EconomyParams",
    "FirmChoice",
    "GasketState",
    "IRBox",
    "IrboxError",
    "IsoclineKind",
    "IsoclineSpec",
    "LimitError",
    "Panel",
    "PanelMode",
    "ProbabilityMethod",
    "RegionLabel",
    "RiskIndexSet",
    "SchemaError",
    "TriangleSet",
    "ValidationError",
    "WelfareReport",
    "box_count",
    "box_count_points",
    "build_irbox",
    "build_panel",
    "classify_point",
    "closed_form_area_removed",
    "closed_form_perimeter",
    "compute_indices",
    "expected_payoff",
    "firi_ray_slopes",
    "fit_dimension",
    "gasket_at_depth",
    "initial_state",
    "insolvency_probability",
    "isocline",
    "iterate",
    "optimize_firm",
    "pi_fraction",
    "read_panel_csv",
    "read_records_csv",
    "score_panel",
    "utility",
    "validate_record",
    "welfare",
]
