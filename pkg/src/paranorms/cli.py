"""Command-line front door.

Subcommands: audit, certify, modulus, verify, ball.  Reports are written as
JSON or CSV with every float rendered to 17 significant digits, so identical
configs and seeds reproduce byte-identical files.

Exit codes: 0 success (verdicts of any kind), 1 verification violation,
2 input error, 3 requested method lacks its certification.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import __version__
from .conditions import (Grid2, UC_THM1, UC_THM4, UC_THM5, audit_all, certify,
                         default_grid)
from .expr import ExprError
from .generator import GeneratorError, parse_family_spec
from .measure import MeasureError, parse_weights
from .modulus import (ModulusError, RouteUnavailableError, build_table,
                      method_delta_fn)
from .oracle import check_lower_bound
from .paranorm import (ParanormContext, ParanormError, ball_boundary,
                       boundary_symmetry_defect)

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_ROUTE = 3

METHOD_REQUIREMENTS = {
    "eA": UC_THM1,
    "eF": UC_THM4,
    "thm5": UC_THM5,
    "clarkson": UC_THM1,
}


class InputError(Exception):
    pass


# ---------------------------------------------------------------------------
# deterministic serialization (floats at 17 significant digits)

def fmt_float(x: float) -> str:
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".17g")


def _json_value(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        out = obj.replace("\\", "\\\\").replace('"', '\\"')
        return f'"{out}"'
    if isinstance(obj, float):
        if math.isfinite(obj):
            return fmt_float(obj)
        return f'"{fmt_float(obj)}"'
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, dict):
        items = ", ".join(f"{_json_value(str(k))}: {_json_value(v)}"
                          for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_json_value(v) for v in obj) + "]"
    if isinstance(obj, (np.floating,)):
        return _json_value(float(obj))
    raise TypeError(f"cannot serialize {type(obj)!r}")


def json_report(config_echo: dict, results) -> str:
    doc = {"tool_version": __version__, "config_echo": config_echo,
           "results": results}
    return _json_value(doc) + "\n"


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return fmt_float(float(value))
    if isinstance(value, (tuple, list)):
        return ";".join(_cell(v) for v in value)
    return str(value)


def csv_report(columns, rows) -> str:
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# argument helpers

def parse_value_list(text: str) -> list:
    """Comma list '0.5,1,2' or range 'lo:hi:n' / 'lo:hi:n:log'."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) not in (3, 4):
            raise InputError(f"range syntax is lo:hi:n[:log|lin], got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        spacing = parts[3] if len(parts) == 4 else "lin"
        if n < 1:
            raise InputError(f"range needs n >= 1, got {n}")
        if spacing == "log":
            if lo <= 0:
                raise InputError("log range needs lo > 0")
            return list(np.logspace(math.log10(lo), math.log10(hi), n))
        if spacing in ("lin", "linear"):
            return list(np.linspace(lo, hi, n))
        raise InputError(f"unknown spacing {spacing!r}")
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as err:
        raise InputError(f"malformed value list {text!r}: {err}") from None


def parse_grid(text: str) -> Grid2:
    parts = text.split(":")
    if len(parts) != 4:
        raise InputError(f"grid syntax is lo:hi:n:log|lin, got {text!r}")
    spacing = {"log": "log", "lin": "linear", "linear": "linear"}.get(parts[3])
    if spacing is None:
        raise InputError(f"grid spacing must be log or lin, got {parts[3]!r}")
    try:
        return Grid2(float(parts[0]), float(parts[1]), int(parts[2]), spacing)
    except ValueError as err:
        raise InputError(str(err)) from None


def _context(args) -> ParanormContext:
    g = parse_family_spec(args.phi)
    space = parse_weights(args.weights)
    return ParanormContext(g, space)


def _grid_or_default(args, g) -> Grid2:
    return parse_grid(args.grid) if args.grid else default_grid(g)


# ---------------------------------------------------------------------------
# subcommands

def cmd_audit(args) -> int:
    g = parse_family_spec(args.phi)
    grid = _grid_or_default(args, g)
    reports = audit_all(g, grid)
    config = {"command": "audit", "phi": args.phi, "grid": grid.describe(),
              "format": args.format}
    if args.format == "json":
        text = json_report(config, [rep.to_dict() for rep in reports])
    else:
        columns = ("name", "verdict", "margin", "normalized_margin",
                   "witness", "excluded", "discrepancy")
        rows = [(rep.name, rep.verdict, rep.margin, rep.normalized_margin,
                 rep.witness, rep.excluded, rep.discrepancy)
                for rep in reports]
        text = csv_report(columns, rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    ctx = _context(args)
    grid = _grid_or_default(args, ctx.generator)
    cert = certify(ctx.generator, ctx.space, grid)
    config = {"command": "certify", "phi": args.phi, "weights": args.weights,
              "grid": grid.describe(), "format": args.format}
    if args.format == "json":
        text = json_report(config, [cert.to_dict()])
    else:
        columns = ("section", "name", "verdict", "margin", "witness")
        rows = [("paranorm-route", name, "claimed", None, None)
                for name in (cert.paranorm_routes or ["none"])]
        rows += [("uc-route", name, "claimed", None, None)
                 for name in (cert.uc_routes or ["none"])]
        rows += [("condition", rep.name, rep.verdict, rep.margin, rep.witness)
                 for rep in cert.reports.values()]
        text = csv_report(columns, rows)
    _emit(text, args.out)
    return EXIT_OK


def _gate_method(cert, method: str, g) -> None:
    required = METHOD_REQUIREMENTS[method]
    if method == "clarkson" and (g.family is None or g.family[0] != "power"):
        raise RouteUnavailableError(
            "clarkson method needs a power-family generator")
    if required not in cert.uc_routes:
        raise RouteUnavailableError(
            f"method {method} needs certification {required}; available "
            f"routes: {cert.uc_routes or ['none']}")


def cmd_modulus(args) -> int:
    ctx = _context(args)
    grid = _grid_or_default(args, ctx.generator)
    cert = certify(ctx.generator, ctx.space, grid)
    _gate_method(cert, args.method, ctx.generator)
    rs = parse_value_list(args.r)
    epss = parse_value_list(args.eps)
    table = build_table(ctx.generator, args.method, rs, epss, certified=True)
    if not table.rows:
        raise InputError("no (r, eps) pair of the requested grid lies in Delta")
    config = {"command": "modulus", "phi": args.phi, "weights": args.weights,
              "method": args.method, "r": args.r, "eps": args.eps,
              "format": args.format}
    if args.format == "json":
        text = json_report(config, table.to_dicts())
    else:
        text = csv_report(table.CSV_COLUMNS, list(table.csv_rows()))
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    ctx = _context(args)
    grid = _grid_or_default(args, ctx.generator)
    cert = certify(ctx.generator, ctx.space, grid)
    _gate_method(cert, args.method, ctx.generator)
    rs = parse_value_list(args.r)
    epss = parse_value_list(args.eps)
    delta_fn, _ = method_delta_fn(ctx.generator, args.method, certified=True)
    factor = args.inflate_delta
    if factor != 1.0:
        base_fn = delta_fn
        delta_fn = lambda r, e: factor * base_fn(r, e)  # noqa: E731
    report = check_lower_bound(ctx, delta_fn, rs, epss, args.samples,
                               args.seed, label=args.method, slack=args.slack)
    if not report.rows:
        raise InputError("no (r, eps) pair of the requested grid lies in Delta")
    config = {"command": "verify", "phi": args.phi, "weights": args.weights,
              "method": args.method, "r": args.r, "eps": args.eps,
              "samples": args.samples, "seed": args.seed,
              "slack": args.slack, "inflate_delta": factor,
              "format": args.format}
    rows = [{
        "r": row.r, "eps": row.eps, "delta_theory": row.delta_theory,
        "delta_empirical": row.delta_empirical,
        "violation_flag": row.violation, "low_coverage": row.low_coverage,
        "witness_x": list(row.witness_x) if row.witness_x else None,
        "witness_y": list(row.witness_y) if row.witness_y else None,
    } for row in report.rows]
    if args.format == "json":
        text = json_report(config, rows)
    else:
        columns = ("r", "eps", "delta_theory", "delta_empirical",
                   "violation_flag", "witness_x", "witness_y", "low_coverage")
        text = csv_report(columns, [
            (row.r, row.eps, row.delta_theory, row.delta_empirical,
             row.violation, row.witness_x, row.witness_y, row.low_coverage)
            for row in report.rows])
    _emit(text, args.out)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_ball(args) -> int:
    ctx = _context(args)
    boundary = ball_boundary(ctx, args.r, args.n)
    defect = boundary_symmetry_defect(ctx, boundary, args.r)
    if defect > 1e-8 * max(1.0, args.r):
        raise ParanormError(
            f"boundary symmetry defect {defect!r} above tolerance")
    config = {"command": "ball", "phi": args.phi, "weights": args.weights,
              "r": args.r, "n": args.n, "format": args.format,
              "symmetry_defect": defect}
    if args.format == "json":
        rows = [{"theta": float(t), "x1": float(a), "x2": float(b)}
                for t, a, b in boundary]
        text = json_report(config, rows)
    else:
        text = csv_report(("theta", "x1", "x2"),
                          [(float(t), float(a), float(b))
                           for t, a, b in boundary])
    _emit(text, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paranorms",
        description="Audit, certify and stress-test paranormed spaces "
                    "built from generator bijections.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, weights=True):
        p.add_argument("--phi", required=True,
                       help="generator spec: power:p=V | exp:a=V | "
                            "powexp:p=V,a=V | cubicrational:p=V | expr:TEXT")
        if weights:
            p.add_argument("--weights", default="1,1",
                           help="comma-separated weights (default '1,1')")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("audit", help="run every condition check on a generator")
    add_common(p, weights=False)
    p.add_argument("--grid", default=None, help="check grid lo:hi:n:log|lin")
    p.set_defaults(fn=cmd_audit)

    p = sub.add_parser("certify", help="decide applicable paranorm/UC routes")
    add_common(p)
    p.add_argument("--grid", default=None, help="check grid lo:hi:n:log|lin")
    p.set_defaults(fn=cmd_certify)

    p = sub.add_parser("modulus", help="tabulate a modulus of convexity")
    add_common(p)
    p.add_argument("--grid", default=None, help="certification grid")
    p.add_argument("--method", required=True,
                   choices=("eA", "eF", "thm5", "clarkson"))
    p.add_argument("--r", required=True, help="r values: list or lo:hi:n[:log]")
    p.add_argument("--eps", required=True, help="eps values: list or range")
    p.set_defaults(fn=cmd_modulus)

    p = sub.add_parser("verify",
                       help="empirical lower-bound check of a modulus (CI gate)")
    add_common(p)
    p.add_argument("--grid", default=None, help="certification grid")
    p.add_argument("--method", required=True,
                   choices=("eA", "eF", "thm5", "clarkson"))
    p.add_argument("--r", required=True)
    p.add_argument("--eps", required=True)
    p.add_argument("--samples", type=int, default=20000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--slack", type=float, default=1e-9)
    p.add_argument("--inflate-delta", dest="inflate_delta", type=float,
                   default=1.0, help=argparse.SUPPRESS)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("ball", help="sample the boundary of a planar ball")
    add_common(p)
    p.set_defaults(format="csv")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--n", type=int, default=64)
    p.set_defaults(fn=cmd_ball)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad input and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except RouteUnavailableError as err:
        print(f"route unavailable: {err}", file=sys.stderr)
        return EXIT_ROUTE
    except (InputError, ExprError, GeneratorError, MeasureError,
            ParanormError, ModulusError, ValueError) as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
