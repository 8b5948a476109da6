"""Command-line front end: constants | verify | radius | scan | lemma.

Reports are emitted as CSV (12 significant digits, mandatory header) or JSON
to stdout or --out, byte-stable across runs for identical arguments.

Exit codes: 0 success, 1 inequality violations, 2 constants residual breach,
64 usage, 65 domain error, 66 monotonicity abort, 67 expansion budget.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import replace
from typing import Sequence

from . import constants as sharp
from . import functionals as fun
from . import series as ser
from . import verify as ver
from .errors import (
    BudgetExceededError,
    DomainError,
    MonotonicityError,
    NonUniqueRootError,
    RootBracketError,
    UnsupportedInterpretationError,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_RESIDUAL = 2
EXIT_USAGE = 64
EXIT_DOMAIN = 65
EXIT_MONOTONICITY = 66
EXIT_BUDGET = 67

VERIFY_COLUMNS = [
    "theorem", "n", "a", "r", "interpretation",
    "head", "tail", "area", "area_sq", "extra", "total", "margin", "certified",
]
SCAN_COLUMNS = ["theorem", "n", "a", "r", "epsilon", "total", "perturbed_total"]
RADIUS_COLUMNS = [
    "functional", "family", "n", "radius", "lo", "hi", "iterations", "binding", "certified",
]
LEMMA_COLUMNS = ["part", "family", "n", "a0", "r", "lhs", "rhs", "gap", "ok"]
CONSTANTS_COLUMNS = [
    "a_star1", "a_star2", "lambda1", "lambda2", "p",
    "radius_classic", "radius_abs_head",
    "resid_a_star1", "resid_a_star2", "resid_lambda1", "resid_lambda2",
    "resid_p", "resid_radius_abs_head", "ok",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# --------------------------------------------------------------------------
# Argument parsing helpers
# --------------------------------------------------------------------------

def parse_family(text: str) -> ser.FamilySpec:
    """name:params with params comma-separated, e.g. moebius:0.5, unit:0.6,2,
    scaled:0.6,2, const:0.3, blaschke:0.3,-0.5."""
    name, _, params = text.partition(":")
    try:
        parts = [p for p in params.split(",") if p] if params else []
        if name == "moebius":
            (a,) = parts
            return ser.MoebiusDisk(float(a))
        if name == "unit":
            a, n = parts
            return ser.ExtremalPolydiskUnit(float(a), int(n))
        if name == "scaled":
            a, n = parts
            return ser.ExtremalPolydiskScaled(float(a), int(n))
        if name == "const":
            (c,) = parts
            return ser.ConstantFn(complex(c))
        if name == "blaschke":
            if not parts:
                raise ValueError("no zeros")
            return ser.FiniteBlaschke(tuple(complex(p) for p in parts))
    except DomainError:
        raise
    except ValueError as exc:
        raise UsageError(f"cannot parse family {text!r}: {exc}") from None
    raise UsageError(f"unknown family {name!r}")


def parse_grid(text: str) -> list[float]:
    """start:stop:step inclusive grid, or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            return [float(parts[0])]
        if len(parts) == 3:
            start, stop, step = (float(p) for p in parts)
            return ver.grid_values(start, stop, step)
    except (DomainError, ValueError) as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from None
    raise UsageError(f"cannot parse grid {text!r}; expected start:stop:step")


def parse_n_list(text: str) -> list[int]:
    try:
        values = [int(p) for p in text.split(",") if p]
    except ValueError:
        raise UsageError(f"cannot parse dimension list {text!r}") from None
    if not values:
        raise UsageError("empty dimension list")
    return values


def _resolve_r(text: str, theorem_id: str | None, n: int) -> float:
    if text == "threshold":
        if theorem_id is None:
            raise UsageError("threshold radius needs a theorem id")
        return ver.THEOREMS[theorem_id].threshold(n)
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"cannot parse radius {text!r}") from None


def _check_theorem(theorem_id: str) -> str:
    if theorem_id not in ver.THEOREMS:
        raise UsageError(
            f"unknown theorem {theorem_id!r}; choose from {sorted(ver.THEOREMS)}"
        )
    return theorem_id


# --------------------------------------------------------------------------
# Report emission
# --------------------------------------------------------------------------

def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".12g")
    return str(value)


def emit(
    rows: list[dict],
    columns: list[str],
    out_format: str,
    out_path: str | None,
    meta: dict,
) -> None:
    if out_format == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([_fmt(row[c]) for c in columns])
        text = buffer.getvalue()
    else:
        text = json.dumps(
            {"meta": meta, "rows": rows}, indent=2, sort_keys=True
        ) + "\n"
    if out_path:
        with open(out_path, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _breakdown_row(
    theorem: str, n: int, a: float, r: float, breakdown: fun.TermBreakdown
) -> dict:
    return {
        "theorem": theorem,
        "n": n,
        "a": a,
        "r": r,
        "interpretation": breakdown.interpretation,
        "head": breakdown.head_value,
        "tail": breakdown.majorant_tail,
        "area": breakdown.area_term,
        "area_sq": breakdown.area_sq_contribution,
        "extra": breakdown.extra_area_contribution,
        "total": breakdown.total,
        "margin": breakdown.margin,
        "certified": breakdown.certified,
    }


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------

def cmd_constants(ns: argparse.Namespace) -> int:
    report = sharp.constants_report(tol_override=ns.tol)
    d = report.as_dict()
    row = {
        key: d[key]
        for key in (
            "a_star1", "a_star2", "lambda1", "lambda2", "p",
            "radius_classic", "radius_abs_head",
        )
    }
    for name, value in d["residuals"].items():
        row[f"resid_{name}"] = value
    row["ok"] = report.ok
    meta = {"command": "constants", "tolerances": report.tolerances}
    if ns.format == "json":
        emit([d], CONSTANTS_COLUMNS, "json", ns.out, meta)
    else:
        emit([row], CONSTANTS_COLUMNS, "csv", ns.out, meta)
    if not report.ok:
        print(
            "constants residual breach: " + ", ".join(report.failed()),
            file=sys.stderr,
        )
        return EXIT_RESIDUAL
    return EXIT_OK


def cmd_verify(ns: argparse.Namespace) -> int:
    theorem_id = _check_theorem(ns.theorem)
    td = ver.THEOREMS[theorem_id]
    spec = fun.preset(td.preset_name)

    def tolerance(breakdown: fun.TermBreakdown) -> float:
        return ns.tol if ns.tol is not None else ver.violation_tolerance(breakdown)

    rows: list[dict] = []
    violations = 0
    if ns.family is not None:
        family = parse_family(ns.family)
        n = ser.dimension(family)
        r = _resolve_r(ns.r, theorem_id, n)
        a0 = abs(ser.constant_term(family))
        interps = [fun.INTERP_LITERAL] if n == 1 else [fun.INTERP_LITERAL, fun.INTERP_SLICE]
        for interp in interps:
            breakdown = fun.evaluate(
                spec.with_interpretation(interp),
                family,
                fun.RadiusSpec.diagonal(n, r),
            )
            rows.append(_breakdown_row(theorem_id, n, a0, r, breakdown))
            if interp == fun.INTERP_LITERAL and breakdown.total > 1.0 + tolerance(breakdown):
                violations += 1
    else:
        n_list = parse_n_list(ns.n) if ns.n else None
        a_grid = parse_grid(ns.a) if ns.a else None
        r_values = None if ns.r == "threshold" else [_resolve_r(ns.r, theorem_id, 1)]
        report = ver.theorem_sweep(theorem_id, n_list, a_grid, r_values)
        for row in report.rows:
            rows.append(_breakdown_row(row.theorem, row.n, row.a, row.r, row.breakdown))
            if (
                row.breakdown.interpretation == fun.INTERP_LITERAL
                and row.breakdown.total > 1.0 + tolerance(row.breakdown)
            ):
                violations += 1
    meta = {"command": "verify", "theorem": theorem_id, "violations": violations}
    emit(rows, VERIFY_COLUMNS, ns.format, ns.out, meta)
    return EXIT_VIOLATIONS if violations else EXIT_OK


def cmd_radius(ns: argparse.Namespace) -> int:
    name = ns.functional
    if name in ver.THEOREMS:
        preset_name = ver.THEOREMS[name].preset_name
    elif name in fun.PRESET_NAMES:
        preset_name = name
    else:
        raise UsageError(f"unknown functional {name!r}")
    family = parse_family(ns.family)
    result = ver.radius_search(fun.preset(preset_name), family, tol=ns.tol)
    row = {
        "functional": name,
        "family": ns.family,
        "n": ser.dimension(family),
        "radius": result.radius,
        "lo": result.bracket[0],
        "hi": result.bracket[1],
        "iterations": result.iterations,
        "binding": result.binding,
        "certified": result.certified,
    }
    meta = {"command": "radius", "functional": name, "family": ns.family, "tol": ns.tol}
    emit([row], RADIUS_COLUMNS, ns.format, ns.out, meta)
    return EXIT_OK


def cmd_scan(ns: argparse.Namespace) -> int:
    theorem_id = _check_theorem(ns.theorem)
    try:
        n = int(ns.n) if ns.n else 1
    except ValueError:
        raise UsageError(f"cannot parse dimension {ns.n!r}") from None
    a_grid = parse_grid(ns.a) if ns.a else ver.grid_values(0.0, 0.9999, 0.0001)
    bold_r = None if ns.r == "threshold" else _resolve_r(ns.r, theorem_id, n)
    report = ver.sharpness_scan(theorem_id, a_grid, n=n, bold_r=bold_r, epsilon=ns.epsilon)
    rows = [
        {
            "theorem": theorem_id,
            "n": n,
            "a": row.a,
            "r": report.bold_r,
            "epsilon": report.epsilon,
            "total": row.total,
            "perturbed_total": row.perturbed_total,
        }
        for row in report.rows
    ]
    meta = {
        "command": "scan",
        "theorem": theorem_id,
        "max_total": report.max_total,
        "argmax_a": report.argmax_a,
        "perturbed_max": report.perturbed_max,
        "perturbed_argmax": report.perturbed_argmax,
        "a_star": report.a_star,
    }
    emit(rows, SCAN_COLUMNS, ns.format, ns.out, meta)
    tol = ns.tol if ns.tol is not None else ver.TOL_CLOSED
    return EXIT_OK if report.max_total <= 1.0 + tol else EXIT_VIOLATIONS


def cmd_lemma(ns: argparse.Namespace) -> int:
    family = parse_family(ns.family)
    r = _resolve_r(ns.r, None, ser.dimension(family))
    checks = {"a": ver.lemma1a_check, "b": ver.lemma1b_check, "c": ver.lemma1c_check}
    check = checks[ns.part](family, r)
    if ns.tol is not None:
        check = replace(check, ok=check.lhs <= check.rhs + ns.tol)
    row = {
        "part": ns.part,
        "family": ns.family,
        "n": ser.dimension(family),
        "a0": abs(ser.constant_term(family)),
        "r": r,
        "lhs": check.lhs,
        "rhs": check.rhs,
        "gap": check.gap,
        "ok": check.ok,
    }
    meta = {"command": "lemma", "part": ns.part, "family": ns.family, "r": r}
    emit([row], LEMMA_COLUMNS, ns.format, ns.out, meta)
    return EXIT_OK if check.ok else EXIT_VIOLATIONS


# --------------------------------------------------------------------------
# Parser wiring
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="bohrineq",
        description=(
            "Numerical verification of classical and improved Bohr inequalities "
            "on the disk and polydisk: sharp constants, theorem sweeps, radius "
            "searches, sharpness scans, and lemma-level bound checks."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", default=None, help="write the report to this path")
        p.add_argument("--seed", type=int, default=0, help="reserved")

    p = sub.add_parser("constants", help="compute sharp constants and residuals")
    common(p)
    p.add_argument("--tol", type=float, default=None, help="override residual tolerances")
    p.set_defaults(handler=cmd_constants)

    p = sub.add_parser("verify", help="sweep a theorem over a parameter grid")
    common(p)
    p.add_argument("--theorem", required=True)
    p.add_argument("--family", default=None, help="fixed family instead of the grid")
    p.add_argument("--n", default=None, help="comma-separated dimensions")
    p.add_argument("--a", default=None, help="parameter grid start:stop:step")
    p.add_argument("--r", default="threshold", help='radius value or "threshold"')
    p.add_argument("--tol", type=float, default=None, help="override violation tolerance")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("radius", help="largest radius keeping the functional <= 1")
    common(p)
    p.add_argument("--functional", required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(handler=cmd_radius)

    p = sub.add_parser("scan", help="sharpness scan at the threshold radius")
    common(p)
    p.add_argument("--theorem", required=True)
    p.add_argument("--n", default=None)
    p.add_argument("--a", default=None, help="parameter grid start:stop:step")
    p.add_argument("--r", default="threshold")
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--tol", type=float, default=None, help="override pass tolerance")
    p.set_defaults(handler=cmd_scan)

    p = sub.add_parser("lemma", help="check one lemma part on one family")
    common(p)
    p.add_argument("--part", choices=("a", "b", "c"), required=True)
    p.add_argument("--family", required=True)
    p.add_argument("--r", required=True)
    p.add_argument("--tol", type=float, default=None, help="override pass tolerance")
    p.set_defaults(handler=cmd_lemma)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        return ns.handler(ns)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (
        DomainError,
        UnsupportedInterpretationError,
        RootBracketError,
        NonUniqueRootError,
    ) as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except MonotonicityError as exc:
        print(f"monotonicity error: {exc}", file=sys.stderr)
        return EXIT_MONOTONICITY
    except BudgetExceededError as exc:
        print(f"budget error: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
