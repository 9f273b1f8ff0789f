"""Command-line front end.

Subcommands: eval, bounds, verify, compare, sweep, lupas.

Exit codes: 0 when every check holds, 2 when at least one check is
violated, 1 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import enum
import io
import json
import math
import sys

import numpy as np

from . import lupas as lp
from . import quadrature as q
from .bounds import BoundFamily, bracket_for, cert_k2
from .core import (
    AxisPair,
    Modulus,
    SeriesPolicy,
    complete_e,
    complete_e_series,
    complete_k,
    complete_k_series,
    e_two_param,
    k_two_param,
)
from .errors import AccuracyError, DomainError, TruncationError, UsageError
from .verify import (
    DEFAULT_TOL,
    GridSpec,
    compare_families,
    evaluate_grid,
    evaluate_point,
    verify_family,
)

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION = 0, 1, 2
AGREEMENT_TOL = 1e-10
SWEEP_COLUMNS = ["family", "r", "s", "lower", "upper", "reference", "slack_lower", "slack_upper", "clamped"]
FAMILY_HELP = ", ".join(f.value for f in BoundFamily)


# -- serialisation -------------------------------------------------------------

def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def to_plain(obj):
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def _json_scalar(v) -> str:
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return "NaN"
        if math.isinf(v):
            return "Infinity" if v > 0 else "-Infinity"
        return fmt_float(v)
    return json.dumps(str(v))


def dump_json(obj, indent: int = 0) -> str:
    """JSON with every float written to 17 significant digits."""
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {dump_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_json_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + dump_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return _json_scalar(obj)


def csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return fmt_float(v)
    if isinstance(v, (list, tuple)):
        return " ".join(csv_cell(x) for x in v)
    return str(v)


def dump_csv(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([csv_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def dump_table(columns, rows) -> str:
    cells = [[csv_cell(row.get(c)) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _flatten(record: dict, prefix: str = "") -> list:
    out = []
    for k, v in record.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            out += _flatten(v, name + ".")
        elif isinstance(v, list) and any(isinstance(x, (dict, list)) for x in v):
            for i, x in enumerate(v):
                out += _flatten(x if isinstance(x, dict) else {"": x}, f"{name}[{i}].")
        else:
            out.append({"field": name.rstrip("."), "value": v})
    return out


def render(args, record: dict, columns=None, rows=None) -> str:
    """Render a report: JSON gets the whole record, table/csv get ``rows`` when given."""
    record = to_plain(record)
    if args.format == "json":
        return dump_json(record) + "\n"
    if rows is None:
        columns, rows = ["field", "value"], _flatten(record)
    rows = [to_plain(r) for r in rows]
    return dump_csv(columns, rows) if args.format == "csv" else dump_table(columns, rows)


def emit(args, text: str):
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- subcommands ----------------------------------------------------------------

def _params(args, dim):
    if args.r is None:
        raise UsageError("--r is required")
    if dim == 1:
        if args.s is not None:
            raise UsageError("--s is only meaningful for two-parameter kinds")
        return Modulus(args.r)
    if args.s is None:
        raise UsageError("--s is required for two-parameter kinds")
    return AxisPair(args.r, args.s)


def _try(fn):
    try:
        return fn()
    except (TruncationError, AccuracyError):
        return None


def cmd_eval(args) -> int:
    kind = args.kind.upper()
    tol = args.tol if args.tol is not None else 1e-12
    policy = SeriesPolicy()
    if kind in ("K", "E"):
        m = _params(args, 1)
        values = {
            "agm": complete_k(m) if kind == "K" else complete_e(m),
            "series": _try(lambda: (complete_k_series if kind == "K" else complete_e_series)(m, policy)),
            "quadrature": _try(lambda: (q.complete_k_quad if kind == "K" else q.complete_e_quad)(m.r, tol)),
        }
        r, s = m.r, None
    else:
        p = _params(args, 2)
        hi, lo = max(p.r, p.s), min(p.r, p.s)
        # reduce to one modulus: K(r, s) = K(k)/max, E(r, s) = max E(k), k^2 = 1 - (lo/hi)^2
        k = math.sqrt((1.0 - lo / hi) * (1.0 + lo / hi))

        def series():
            if k == 0.0:
                return 0.5 * math.pi / hi if kind == "K2" else 0.5 * math.pi * hi
            if kind == "K2":
                return complete_k_series(k, policy) / hi
            return hi * complete_e_series(k, policy)

        values = {
            "agm": k_two_param(p) if kind == "K2" else e_two_param(p),
            "series": _try(series),
            "quadrature": _try(lambda: (q.k_two_param_quad if kind == "K2" else q.e_two_param_quad)(p.r, p.s, tol)),
        }
        r, s = p.r, p.s
    avail = [v for v in values.values() if v is not None]
    disc = max(abs(x - y) / abs(y) for x in avail for y in avail)
    status = "AGREE" if disc <= AGREEMENT_TOL else "DISAGREE"
    record = {
        "kind": kind,
        "r": r,
        "s": s,
        "values": values,
        "max_rel_discrepancy": disc,
        "agreement_tol": AGREEMENT_TOL,
        "status": status,
    }
    rows = [{"kind": kind, "r": r, "s": s, "method": k_, "value": v} for k_, v in values.items()]
    emit(args, render(args, record, ["kind", "r", "s", "method", "value"], rows))
    return EXIT_OK if status == "AGREE" else EXIT_VIOLATION


def cmd_bounds(args) -> int:
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    dim = 1 if args.s is None else 2
    params = _params(args, dim)
    if args.family:
        fams = [BoundFamily.parse(args.family)]
        if fams[0].dim != dim:
            raise UsageError(f"{fams[0]} needs {'--r and --s' if fams[0].dim == 2 else 'only --r'}")
    else:
        fams = [f for f in BoundFamily if f.dim == dim]
    key = params.r if dim == 1 else (params.r, params.s)
    rows = []
    for fam in fams:
        pt = evaluate_point(fam, key)
        rows.append({
            "family": fam,
            "lower": pt.lower,
            "upper": pt.upper,
            "reference": pt.reference,
            "slack": pt.slack,
            "clamped": pt.clamped,
            "holds": pt.slack >= -tol,
        })
    record = {"r": params.r, "s": getattr(params, "s", None), "tol": tol, "brackets": rows}
    emit(args, render(args, record, ["family", "lower", "upper", "reference", "slack", "clamped", "holds"], rows))
    return EXIT_OK if all(r["holds"] for r in rows) else EXIT_VIOLATION


def _grid_for(args, family: BoundFamily) -> GridSpec:
    if family.dim == 1:
        return GridSpec.uniform(
            args.points or 10_000,
            0.0 if args.rmin is None else args.rmin,
            1.0 if args.rmax is None else args.rmax,
        )
    lo = 1e-2 if args.rmin is None else args.rmin
    hi = 1e2 if args.rmax is None else args.rmax
    if getattr(args, "diagonal", False):
        return GridSpec.diagonal(args.points or 200, lo, hi)
    return GridSpec.log2d(
        args.points or 200, lo, hi, args.smin, args.smax, upper_half=getattr(args, "upper_half", False)
    )


def cmd_verify(args) -> int:
    family = BoundFamily.parse(args.family)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    report = verify_family(family, _grid_for(args, family), tol, workers=args.workers)
    rows = [
        {
            "params": v.params,
            "reference_value": v.reference_value,
            "lower": v.bracket[0],
            "upper": v.bracket[1],
            "slack": v.slack,
        }
        for v in report.violations
    ]
    if args.format == "json" or not rows:
        text = render(args, report)
    else:
        text = render(args, report, ["params", "reference_value", "lower", "upper", "slack"], rows)
    emit(args, text)
    return EXIT_OK if report.holds else EXIT_VIOLATION


def cmd_compare(args) -> int:
    a, b = BoundFamily.parse(args.a), BoundFamily.parse(args.b)
    report = compare_families(a, b, args.side, _grid_for(args, a))
    emit(args, render(args, report))
    if args.expect and args.expect != report.dominance:
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_sweep(args) -> int:
    family = BoundFamily.parse(args.family)
    tol = args.tol if args.tol is not None else DEFAULT_TOL
    rows = []
    ok = True
    for pt in evaluate_grid(family, _grid_for(args, family), args.workers):
        r, s = (pt.params, None) if family.dim == 1 else pt.params
        ok &= pt.slack >= -tol
        rows.append({
            "family": family,
            "r": r,
            "s": s,
            "lower": pt.lower,
            "upper": pt.upper,
            "reference": pt.reference,
            "slack_lower": pt.slack_lower,
            "slack_upper": pt.slack_upper,
            "clamped": pt.clamped,
        })
    if args.format == "json":
        text = render(args, {"family": family, "rows": rows})
    else:
        text = render(args, {}, SWEEP_COLUMNS, rows)
    emit(args, text)
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_lupas(args) -> int:
    tol = args.tol if args.tol is not None else 1e-12
    if args.random:
        rng = np.random.default_rng(args.seed)
        rows = []
        for i in range(args.random):
            f, g, a, b = lp.random_catalog_pair(rng)
            chk = lp.check_lemma(f, g, a, b, tol)
            rows.append({
                "index": i, "f": repr(f), "g": repr(g), "a": a, "b": b,
                "gap": chk.gap, "radius": chk.radius, "budget": chk.budget, "holds": chk.holds,
            })
        record = {"seed": args.seed, "n_pairs": len(rows), "n_failures": sum(not r["holds"] for r in rows),
                  "checks": rows}
        cols = ["index", "f", "g", "a", "b", "gap", "radius", "budget", "holds"]
        emit(args, render(args, record, cols, rows))
        return EXIT_OK if record["n_failures"] == 0 else EXIT_VIOLATION

    if args.theorem:
        fam = BoundFamily.parse(args.theorem)
        params = args.r if fam.dim == 1 else (args.r, args.s)
        if args.r is None or (fam.dim == 2 and args.s is None):
            raise UsageError("--theorem needs --r (and --s for two-parameter families)")
        numeric = lp.reproduce_theorem_bracket(fam, params, tol)
        closed = lp.closed_form_bracket(fam, params)
        inside = closed.lower - 1e-9 <= numeric.lower and numeric.upper <= closed.upper + 1e-9
        record = {"theorem": fam, "r": args.r, "s": args.s, "numeric": numeric, "closed_form": closed,
                  "numeric_within_closed_form": inside}
        emit(args, render(args, record))
        return EXIT_OK if inside else EXIT_VIOLATION

    if args.f is None or args.g is None:
        raise UsageError("lupas needs --f and --g, or --theorem, or --random N")
    a = 0.0 if args.a is None else float(args.a)
    b = 0.5 * math.pi if args.b is None else float(args.b)
    f, g = lp.parse_function(args.f), lp.parse_function(args.g)
    res = lp.lupas_bracket(f, g, a, b, tol)
    mfg = lp.mean_product(f, g, a, b, tol)
    gap = abs(mfg.value - res.center)
    holds = gap <= res.radius + res.error_budget + mfg.abs_error_estimate
    record = {"f": args.f, "g": args.g, "a": a, "b": b, "result": res, "mean_fg": mfg.value,
              "gap": gap, "holds": holds}
    emit(args, render(args, record))
    return EXIT_OK if holds else EXIT_VIOLATION


# -- parser -----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help="slack tolerance for checks (default 1e-13) or quadrature tolerance (default 1e-12)")
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--out", default=None, help="output path (default: standard output)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized sampling")
    common.add_argument("--workers", type=int, default=1, help="processes for grid evaluation")

    grid = _Parser(add_help=False)
    grid.add_argument("--points", type=int, default=None, help="grid points (per axis for 2-d)")
    grid.add_argument("--rmin", type=float, default=None)
    grid.add_argument("--rmax", type=float, default=None)
    grid.add_argument("--smin", type=float, default=None)
    grid.add_argument("--smax", type=float, default=None)
    grid.add_argument("--upper-half", action="store_true", help="2-d grids: keep only s > r")
    grid.add_argument("--diagonal", action="store_true", help="2-d families: sweep the line r = s")

    p = _Parser(prog="ellipbounds", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("eval", parents=[common], help="evaluate K, E, K2 or E2 by every method")
    s.add_argument("--kind", required=True, choices=("K", "E", "K2", "E2", "k", "e", "k2", "e2"))
    s.add_argument("--r", type=float)
    s.add_argument("--s", type=float)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("bounds", parents=[common], help="brackets at one parameter point")
    s.add_argument("--family", help=f"one of: {FAMILY_HELP} (default: all applicable)")
    s.add_argument("--r", type=float)
    s.add_argument("--s", type=float)
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("verify", parents=[common, grid], help="grid verification of one family")
    s.add_argument("--family", required=True, help=f"one of: {FAMILY_HELP}")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("compare", parents=[common, grid], help="dominance/crossing analysis of two families")
    s.add_argument("--a", required=True, help="family A")
    s.add_argument("--b", required=True, help="family B")
    s.add_argument("--side", choices=("lower", "upper"), default="lower")
    s.add_argument("--expect", choices=("A-dominates", "B-dominates", "crossing"),
                   help="exit 2 unless the dominance verdict matches")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("sweep", parents=[common, grid], help="plot-ready sweep of bounds vs. reference")
    s.add_argument("--family", required=True, help=f"one of: {FAMILY_HELP}")
    s.set_defaults(func=cmd_sweep, format_default="csv")

    s = sub.add_parser("lupas", parents=[common], help="Lupas bracket for a pair of catalog functions")
    s.add_argument("--f", help="function spec: t, sin, cos, sin^k, cos^k, const:c, poly:c0,c1,.., e:r, k:r, e2:r,s, k2:r,s")
    s.add_argument("--g", help="function spec for g")
    s.add_argument("--a", type=float, help="interval start (default 0)")
    s.add_argument("--b", type=float, help="interval end (default pi/2)")
    s.add_argument("--theorem", help="reproduce a theorem bracket: e-eq31, k-eq35, e2-eq39, k2-eq311-derived")
    s.add_argument("--r", type=float)
    s.add_argument("--s", type=float)
    s.add_argument("--random", type=int, default=0, help="check the lemma on N seeded random catalog pairs")
    s.set_defaults(func=cmd_lupas)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    raw = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(raw)
    if args.command == "sweep" and "--format" not in raw:
        args.format = "csv"
    try:
        return args.func(args)
    except (UsageError, DomainError, ValueError) as exc:
        sys.stderr.write(f"ellipbounds {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except (AccuracyError, TruncationError) as exc:
        sys.stderr.write(f"ellipbounds {args.command}: numerical failure: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
