"""Command-line surface.

Subcommands: indices, irbox, gasket, dimension, simulate, prob.
Exit codes: 0 ok, 2 input/schema error, 3 validation error, 4 internal
limit. Defaults for --tolerance, --format and --depth-cap can be set via
the IRBOX_TOLERANCE, IRBOX_FORMAT and IRBOX_DEPTH_CAP environment
variables. All outputs are pure functions of inputs and flags; files are
written atomically (write-then-rename).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import tempfile
from pathlib import Path

from . import economy_model, risk_indices
from .core_model import (
    DEFAULT_IDENTITY_TOL,
    PanelMode,
    build_panel,
    infer_mode,
    read_records_csv,
)
from .errors import IrboxError, LimitError, SchemaError, ValidationError
from .fractal_dimension import default_window, fit_dimension
from .fractal_gasket import (
    DEFAULT_DEPTH_CAP,
    gasket_at_depth,
    initial_state,
)
from .irbox_geometry import ProbabilityMethod, insolvency_probability
from .render import RenderSpec, render_gasket_svg, render_irbox_svg

PROG = "irbox"


def _env(name: str, cast, fallback):
    raw = os.environ.get(name)
    if raw is None or raw == "":
        return fallback
    try:
        return cast(raw)
    except ValueError:
        raise SchemaError(f"environment variable {name}={raw!r} is invalid") from None


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    parent = target.parent if str(target.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(dir=str(parent), prefix=target.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _resolve_mode(records, mode_flag: str) -> PanelMode:
    if mode_flag == "timeseries":
        return PanelMode.TIME_SERIES
    if mode_flag == "crosssection":
        return PanelMode.CROSS_SECTION
    inferred = infer_mode(records)
    if inferred is None:
        raise ValidationError(
            "panel axis is ambiguous (several firms and several periods); "
            "pass --mode explicitly"
        )
    return inferred


def _read_panel(args):
    records = read_records_csv(
        args.csv, distress_mode=args.distress, tol_rel=args.tolerance
    )
    mode = _resolve_mode(records, args.mode)
    return build_panel(
        records, mode, distress_mode=args.distress, tol_rel=args.tolerance
    )


# ---------------------------------------------------------------- indices

_INDEX_FIELDS = ("tr", "nr", "aco", "firi", "firi_h", "firi_v", "gear", "pi")


def cmd_indices(args) -> int:
    records = read_records_csv(
        args.csv, distress_mode=args.distress, tol_rel=args.tolerance
    )
    if not records:
        raise ValidationError("no records in input")
    scored = [(rec, risk_indices.compute_indices(rec)) for rec in records]
    firis = [idx.firi for _, idx in scored]
    summary = {
        "records": len(scored),
        "firi_min": min(firis),
        "firi_max": max(firis),
        "firi_mean": sum(firis) / len(firis),
    }

    if args.format == "json":
        payload = {
            "records": [
                {
                    "firm_id": rec.firm_id,
                    "period": rec.period,
                    "debt": str(rec.debt),
                    "equity": str(rec.equity),
                    "assets": str(rec.assets),
                    "assets_synthesized": rec.assets_synthesized,
                    **idx.as_dict(),
                }
                for rec, idx in scored
            ],
            "summary": summary,
        }
        _write_text(args.out, _json_text(payload))
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ("firm_id", "period", "debt", "equity", "assets", "assets_synthesized")
            + _INDEX_FIELDS
        )
        for rec, idx in scored:
            row = idx.as_dict()
            writer.writerow(
                (
                    rec.firm_id,
                    rec.period,
                    str(rec.debt),
                    str(rec.equity),
                    str(rec.assets),
                    "true" if rec.assets_synthesized else "false",
                )
                + tuple(repr(row[f]) if isinstance(row[f], float) else row[f]
                        for f in _INDEX_FIELDS)
            )
        _write_text(args.out, buf.getvalue())
        print(
            f"{PROG}: {summary['records']} record(s); firi min "
            f"{summary['firi_min']!r} max {summary['firi_max']!r} mean "
            f"{summary['firi_mean']!r}",
            file=sys.stderr,
        )
    return 0


# ------------------------------------------------------------------ irbox

def cmd_irbox(args) -> int:
    panel = _read_panel(args)
    spec = RenderSpec(
        width=args.width,
        height=args.height,
        show_points=args.points,
        show_unity=args.unity,
        tr_levels=tuple(args.tr),
        nr_levels=tuple(args.nr),
        aco_levels=tuple(args.aco),
        firi_levels=tuple(args.firi),
        gasket_depth=args.gasket_depth,
    )
    svg = render_irbox_svg(panel, spec, depth_cap=args.depth_cap)
    _write_text(args.out, svg)
    return 0


# ----------------------------------------------------------------- gasket

def _gasket_stats(state) -> dict:
    area_removed = state.area_removed
    area_remaining = state.area_remaining
    coeff = state.perimeter_coefficient
    return {
        "depth": state.depth,
        "remaining_count": state.remaining_count,
        "removed_count_total": state.removed_count_total,
        "area_removed": f"{area_removed.numerator}/{area_removed.denominator}",
        "area_remaining": f"{area_remaining.numerator}/{area_remaining.denominator}",
        "perimeter_coefficient": f"{coeff.numerator}/{coeff.denominator}",
        "perimeter_value": state.perimeter_value,
    }


def cmd_gasket(args) -> int:
    state = gasket_at_depth(args.depth, depth_cap=args.depth_cap)
    if args.svg_out:
        _write_text(args.svg_out, render_gasket_svg(state, args.width, args.height))
    _write_text(args.stats_out, _json_text(_gasket_stats(state)))
    return 0


# -------------------------------------------------------------- dimension

def cmd_dimension(args) -> int:
    if args.square:
        state = initial_state()
    else:
        state = gasket_at_depth(args.depth, depth_cap=args.depth_cap)
    window = tuple(args.window) if args.window else default_window(state)
    fit = fit_dimension(state, window)
    if args.counts_out:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(("scale_log2", "occupied"))
        writer.writerows(fit.samples)
        _write_text(args.counts_out, buf.getvalue())
    payload = {
        "dimension": fit.dimension,
        "fit_quality": fit.fit_quality,
        "window": list(fit.scale_window),
        "samples": [list(s) for s in fit.samples],
        "set": "square" if args.square else f"gasket_depth_{state.depth}",
    }
    _write_text(args.out, _json_text(payload))
    return 0


# --------------------------------------------------------------- simulate

def _load_scenario(path: str):
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as err:
        raise SchemaError(f"{path}: invalid JSON ({err})") from None
    if not isinstance(raw, dict) or "params" not in raw or "firms" not in raw:
        raise SchemaError(f"{path}: scenario needs 'params' and 'firms'")
    p = raw["params"]
    try:
        params = economy_model.EconomyParams(
            r=float(p["r"]),
            z=float(p["z"]),
            tau=float(p["tau"]),
            p=float(p["p"]),
            pi_store=float(p.get("pi_store", 0.0)),
        )
    except KeyError as err:
        raise SchemaError(f"{path}: params missing {err}") from None
    except (TypeError, ValueError) as err:
        raise ValidationError(f"{path}: bad params ({err})") from None
    firms = []
    for i, firm in enumerate(raw["firms"]):
        try:
            firms.append(
                (
                    str(firm.get("id", f"firm{i + 1}")),
                    float(firm["d"]),
                    float(firm["e"]),
                    float(firm["x"]),
                )
            )
        except (KeyError, TypeError, ValueError):
            raise SchemaError(f"{path}: firm #{i + 1} needs numeric d, e, x") from None
    if not firms:
        raise SchemaError(f"{path}: scenario has no firms")
    return params, firms


def cmd_simulate(args) -> int:
    params, firms = _load_scenario(args.scenario)
    choices = []
    rows = []
    for firm_id, d, e, x in firms:
        choice = economy_model.optimize_firm(d, e, x, params)
        choices.append(choice)
        rows.append(
            {
                "id": firm_id,
                "d": d,
                "e": e,
                "x": x,
                "y": choice.y,
                "risky_assets": choice.risky_assets,
                "funding_fraction": choice.funding_fraction,
                "expected_payoff": economy_model.expected_payoff(choice, params),
                "utility": economy_model.utility(choice, params),
                "debt_risk_free": choice.debt_risk_free(params),
            }
        )
    report = economy_model.welfare(choices, params)
    payload = {
        "params": {
            "r": params.r,
            "z": params.z,
            "tau": params.tau,
            "p": params.p,
            "pi_store": params.pi_store,
        },
        "choices": rows,
        "welfare": {
            "p1": report.p1,
            "p2": report.p2,
            "p2_at_funding_split": report.p2_at_funding_split,
            "w": report.w,
            "equilibrium_pi": report.equilibrium_pi,
        },
    }
    _write_text(args.out, _json_text(payload))
    return 0


# ------------------------------------------------------------------- prob

def cmd_prob(args) -> int:
    panel = _read_panel(args)
    payload: dict = {"records": len(panel)}
    if args.method in ("empirical", "both"):
        payload["empirical"] = insolvency_probability(
            panel, ProbabilityMethod.EMPIRICAL
        )
    if args.method in ("geometric", "both"):
        payload["uniform_geometric"] = insolvency_probability(
            panel, ProbabilityMethod.UNIFORM_GEOMETRIC
        )
        payload["measure"] = "uniform over the distress-extended box"
    _write_text(args.out, _json_text(payload))
    return 0


# ----------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog=PROG,
        description="Insolvency risk indices, the risk box, and its fractal gasket.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--tolerance",
        type=float,
        default=_env("IRBOX_TOLERANCE", float, DEFAULT_IDENTITY_TOL),
        help="relative accounting-identity tolerance",
    )
    common.add_argument(
        "--depth-cap",
        type=int,
        default=_env("IRBOX_DEPTH_CAP", int, DEFAULT_DEPTH_CAP),
        help="maximum gasket depth",
    )

    panel_args = argparse.ArgumentParser(add_help=False)
    panel_args.add_argument("csv", help="input CSV (firm_id,period,debt,equity[,assets])")
    panel_args.add_argument("--distress", action="store_true",
                            help="admit nonpositive equity")
    panel_args.add_argument("--mode", choices=("auto", "timeseries", "crosssection"),
                            default="auto", help="panel axis")

    p = sub.add_parser("indices", parents=[common],
                       help="per-record risk indices from CSV")
    p.add_argument("csv")
    p.add_argument("-o", "--out", default=None, help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"),
                   default=_env("IRBOX_FORMAT", str, "csv"))
    p.add_argument("--distress", action="store_true")
    p.set_defaults(func=cmd_indices)

    p = sub.add_parser("irbox", parents=[common, panel_args],
                       help="render the risk box as SVG")
    p.add_argument("-o", "--out", default=None)
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=640)
    p.add_argument("--points", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--unity", action="store_true", help="draw the d = e line")
    p.add_argument("--tr", type=float, action="append", default=[],
                   help="total-risk isocline level (repeatable)")
    p.add_argument("--nr", type=float, action="append", default=[],
                   help="net-risk isocline level (repeatable)")
    p.add_argument("--aco", type=float, action="append", default=[],
                   help="overlap isocline level (repeatable)")
    p.add_argument("--firi", type=float, action="append", default=[],
                   help="risk-index ray level in (0, 1] (repeatable)")
    p.add_argument("--gasket-depth", type=int, default=None,
                   help="overlay the gasket at this depth")
    p.set_defaults(func=cmd_irbox)

    p = sub.add_parser("gasket", parents=[common],
                       help="construct the gasket; emit SVG and exact stats")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--svg-out", default=None)
    p.add_argument("--stats-out", default=None, help="stats JSON (default stdout)")
    p.add_argument("--width", type=int, default=640)
    p.add_argument("--height", type=int, default=640)
    p.set_defaults(func=cmd_gasket)

    p = sub.add_parser("dimension", parents=[common],
                       help="box-counting dimension fit")
    p.add_argument("--depth", type=int, default=10)
    p.add_argument("--window", type=int, nargs=2, metavar=("MIN", "MAX"),
                   default=None)
    p.add_argument("--square", action="store_true",
                   help="fit the filled unit square instead of the gasket")
    p.add_argument("--counts-out", default=None, help="write (scale, count) CSV")
    p.add_argument("-o", "--out", default=None, help="fit JSON (default stdout)")
    p.set_defaults(func=cmd_dimension)

    p = sub.add_parser("simulate", parents=[common],
                       help="optimize firms in a scenario and report welfare")
    p.add_argument("scenario", help="scenario JSON")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("prob", parents=[common, panel_args],
                       help="insolvency probability estimates")
    p.add_argument("--method", choices=("empirical", "geometric", "both"),
                   default="both")
    p.add_argument("-o", "--out", default=None)
    p.set_defaults(func=cmd_prob)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as err:
        print(f"{PROG}: input error: {err}", file=sys.stderr)
        return 2
    except LimitError as err:
        print(f"{PROG}: limit exceeded: {err}", file=sys.stderr)
        return 4
    except ValidationError as err:
        print(f"{PROG}: validation error: {err}", file=sys.stderr)
        return 3
    except IrboxError as err:
        print(f"{PROG}: error: {err}", file=sys.stderr)
        return 3
    except OSError as err:
        print(f"{PROG}: i/o error: {err}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
