"""Command-line front end: ``python -m jintegral <command> [options]``.

Exit status is 0 when every reported check passes, 1 on a numerical failure
and 2 on a usage error (bad flags or an argument outside an operation's
domain).
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from datetime import datetime, timezone

from . import __version__
from .greens import g_closed
from .jformula import j_hyper
from .mahler import FAMILIES, LaurentPolySpec, mahler_measure
from .modular import LatticeSumSpec, j_lattice, j_special
from .numerics import DomainError, JIntegralError, PrecisionConfig
from .quadrature import RULES, CubatureGrid, g_direct, j_direct
from .verify import CRITERIA, CheckRecord, format_number, run_criteria

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _parse_number(text: str):
    """Real or complex literal: ``0.1``, ``0.05j``, ``0.03+0.02j``."""
    try:
        return float(text)
    except ValueError:
        try:
            return complex(text.replace(" ", "").replace("i", "j"))
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _digits(text: str) -> int:
    d = int(text)
    if not 15 <= d <= 100:
        raise argparse.ArgumentTypeError("digits must lie in [15, 100]")
    return d


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--digits", type=_digits, default=None,
                        help="target significant digits (default: $JINTEGRAL_DIGITS or 30)")
    common.add_argument("--grid-order", type=int, default=None, help="per-axis quadrature order")
    common.add_argument("--panels", type=int, default=None, help="Gauss-Legendre panels per axis")
    common.add_argument("--cutoff-radius", type=int, default=None, help="lattice-sum shell radius")
    common.add_argument("--format", choices=("json", "csv", "plain"), default="json")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    parser = argparse.ArgumentParser(prog="jintegral", description="Evaluate and cross-check J(t).")
    parser.add_argument("--version", action="version", version=f"jintegral {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("j-direct", parents=[common], help="J(t) by cubature")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--rule", choices=RULES, default=None)

    p = sub.add_parser("j-hyper", parents=[common], help="J(t(alpha)) from the 5F4 closed form")
    p.add_argument("--alpha", type=_parse_number, required=True)

    p = sub.add_parser("j-lattice", parents=[common], help="J(u(exp(-2 pi v))) from lattice sums")
    p.add_argument("--v", type=float, required=True)
    p.add_argument("--tail-mode", choices=("richardson", "none"), default="richardson")

    p = sub.add_parser("g", parents=[common], help="the Green function G(t)")
    p.add_argument("--t", type=_parse_number, required=True)
    p.add_argument("--route", choices=("closed", "direct"), default="closed")

    p = sub.add_parser("mahler", parents=[common], help="Mahler measure of one family member")
    p.add_argument("--family", choices=FAMILIES, required=True)
    p.add_argument("--param", type=float, required=True)
    p.add_argument("--scale", type=float, default=1.0)

    p = sub.add_parser("special", parents=[common], help="closed-form special values")
    p.add_argument("--t", choices=("2", "5/2"), required=True)

    p = sub.add_parser("verify", parents=[common], help="run the acceptance checks")
    p.add_argument("--only", default=None, help="comma-separated criterion numbers (default: all)")
    return parser


def _precision(args) -> PrecisionConfig:
    overrides = {}
    if args.digits is not None:
        overrides["digits"] = args.digits
    if args.grid_order is not None:
        overrides["quad_order"] = args.grid_order
    if args.panels is not None:
        overrides["panels"] = args.panels
    if args.cutoff_radius is not None:
        overrides["cutoff_radius"] = args.cutoff_radius
    return PrecisionConfig.from_env(**overrides)


def _grid(args, prec):
    if args.grid_order is None and args.panels is None and getattr(args, "rule", None) is None:
        return None
    rule = getattr(args, "rule", None) or "gauss-legendre"
    order = prec.ts_level if rule == "tanh-sinh" and args.grid_order is None else prec.quad_order
    return CubatureGrid(order, rule, prec.panels if rule == "gauss-legendre" else 1)


def _evaluation_record(name, inputs, result, digits) -> CheckRecord:
    return CheckRecord(
        0, name, inputs,
        {"value": format_number(result.value, digits), "method": result.method},
        float(result.err_bound), None, 0.0, dict(result.work),
    )


def _evaluate(args, prec):
    digits = prec.digits
    cmd = args.command
    if cmd == "j-direct":
        res = j_direct(args.t, _grid(args, prec), prec)
        return [_evaluation_record(cmd, {"t": repr(args.t)}, res, digits)]
    if cmd == "j-hyper":
        res = j_hyper(args.alpha, prec)
        return [_evaluation_record(cmd, {"alpha": repr(args.alpha)}, res, digits)]
    if cmd == "j-lattice":
        spec = LatticeSumSpec(args.v, prec.cutoff_radius, args.tail_mode)
        return [_evaluation_record(cmd, {"v": repr(args.v), "R": prec.cutoff_radius}, j_lattice(spec), digits)]
    if cmd == "g":
        if args.route == "closed":
            res = g_closed(args.t, prec)
        else:
            if isinstance(args.t, complex):
                raise DomainError("the cubature route needs real t")
            res = g_direct(args.t, _grid(args, prec), prec)
        return [_evaluation_record(cmd, {"t": repr(args.t), "route": args.route}, res, digits)]
    if cmd == "mahler":
        spec = LaurentPolySpec(args.family, args.param, args.scale)
        grid = None
        if args.grid_order is not None:
            grid = CubatureGrid(args.grid_order, "trapezoid", 1)
        res = mahler_measure(spec, grid, prec)
        inputs = {"family": args.family, "param": repr(args.param), "scale": repr(args.scale)}
        return [_evaluation_record(cmd, inputs, res, digits)]
    if cmd == "special":
        res = j_special(f"t={args.t}", prec)
        return [_evaluation_record(cmd, {"t": args.t}, res, digits)]
    raise AssertionError(cmd)


def _selected(only):
    if only is None:
        return None
    try:
        nums = sorted({int(x) for x in only.split(",") if x.strip()})
    except ValueError:
        raise DomainError(f"--only expects criterion numbers, got {only!r}") from None
    bad = [n for n in nums if n not in CRITERIA]
    if bad:
        raise DomainError(f"unknown criteria {bad}; choose from {sorted(CRITERIA)}")
    return nums


def build_report(args, prec, records, wall) -> dict:
    """Assemble the report; everything except ``runtime`` is deterministic."""
    meta = {
        "package": "jintegral",
        "version": __version__,
        "command": args.command,
        "digits": prec.digits,
        "quad_order": prec.quad_order,
        "panels": prec.panels,
        "cutoff_radius": prec.cutoff_radius,
        "all_passed": all(r.passed for r in records),
    }
    checks = [r.as_dict() for r in records]
    body = json.dumps({"meta": meta, "checks": checks}, sort_keys=True, allow_nan=False, default=str)
    meta["determinism_hash"] = hashlib.sha256(body.encode()).hexdigest()
    runtime = {
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "wall_seconds": {str(k): round(v, 3) for k, v in wall.items()},
    }
    return {"meta": meta, "runtime": runtime, "checks": checks}


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    checks = report["checks"]
    if fmt == "csv":
        buf = io.StringIO()
        cols = ["criterion", "name", "passed", "measured", "tolerance", "err_bound", "inputs", "values", "work"]
        writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
        writer.writeheader()
        for c in checks:
            row = {k: c[k] for k in cols}
            for k in ("inputs", "values", "work"):
                row[k] = json.dumps(c[k], sort_keys=True)
            writer.writerow(row)
        return buf.getvalue()
    lines = []
    for c in checks:
        if c["criterion"] == 0:
            vals = ", ".join(f"{k}={v}" for k, v in c["values"].items())
            lines.append(f"{c['name']}: {vals} (err_bound {c['err_bound']:.3g})")
        else:
            status = "PASS" if c["passed"] else "FAIL"
            lines.append(f"[{status}] {c['criterion']} {c['name']}: {c['measured']:.3g} < {c['tolerance']:.0e}")
    return "\n".join(lines) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        prec = _precision(args)
        start = time.perf_counter()
        if args.command == "verify":
            records, wall = run_criteria(_selected(args.only), prec)
        else:
            records = _evaluate(args, prec)
            wall = {args.command: time.perf_counter() - start}
    except DomainError as exc:
        print(f"jintegral: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except JIntegralError as exc:
        print(f"jintegral: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL

    report = build_report(args, prec, records, wall)
    text = render(report, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if report["meta"]["all_passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
