"""Command-line front end: identity verification, Proca solves, boundary
operator extraction, and algebra queries.  JSON in, JSON out; exit status 0
on success, 1 on failed verification, 2 on configuration errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import boundary as bnd
from .forms import ExcludedWeight
from .poly import parse_frac
from .serialize import (
    decode_form, decode_problem, dumps, encode_form, encode_problem,
    encode_report, encode_solution,
)
from .sl2 import (
    bessel_coefficients, casimir_products, frobenius_pair, normal_order,
    series_solutions, LogOperator, NOSeries,
)
from .solver import (
    ProcaProblemSpec, UnsupportedRegime, proca_solve, proca_solve_form,
    residual_orders,
)
from .verify import run_suite
from .poly import frac_str


def _fail_config(msg: str) -> int:
    sys.stderr.write(dumps({"error": "config", "message": msg}))
    return 2


def cmd_verify(args) -> int:
    tier = "full" if args.full else "quick"
    modules = tuple(args.module) if args.module else None
    report = run_suite(seed=args.seed, tier=tier, modules=modules)
    text = dumps(report)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0 if report["summary"]["ok"] else 1


def cmd_solve(args) -> int:
    try:
        with open(args.spec) as fh:
            spec = decode_problem(json.load(fh))
    except (OSError, KeyError, ValueError) as exc:
        return _fail_config("bad problem spec: %s" % exc)
    try:
        if args.backend in ("auto", "tractor", "oracle"):
            sol = proca_solve(spec, backend=args.backend)
        else:
            sol = proca_solve_form(spec, backend=args.backend)
    except (ExcludedWeight, UnsupportedRegime) as exc:
        sys.stderr.write(dumps({"error": "excluded-weight", "message": str(exc)}))
        return 2
    rep = residual_orders(sol)
    out = {
        "problem": encode_problem(spec),
        "solution": encode_solution(sol),
        "residuals": encode_report(rep),
    }
    text = dumps(out)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_obstruction(args) -> int:
    try:
        with open(args.probe) as fh:
            probe = decode_form(json.load(fh))
    except (OSError, KeyError, ValueError) as exc:
        return _fail_config("bad probe: %s" % exc)
    try:
        if args.op == "factor":
            verdict = bnd.factor_check(args.n, args.k, probe)
            out = {"op": "factor", "n": args.n, "k": args.k, "verdict": verdict}
            ok = verdict
        else:
            result = bnd.detour_gauge_Q(args.op, args.n, args.k, args.l, probe)
            out = {"op": args.op, "n": args.n, "k": args.k, "l": args.l,
                   "result": encode_form(result), "verdict": True}
            ok = True
    except (ExcludedWeight, ValueError) as exc:
        sys.stderr.write(dumps({"error": "excluded-weight", "message": str(exc)}))
        return 2
    sys.stdout.write(dumps(out))
    return 0 if ok else 1


def cmd_algebra(args) -> int:
    if args.product is not None:
        series = casimir_products(args.product)
        sys.stdout.write(series.format() + "\n")
        return 0
    if args.word is not None:
        letters = []
        for tok in args.word.split(","):
            tok = tok.strip()
            if tok in ("x", "y", "h"):
                letters.append(tok)
            elif tok.startswith("x^"):
                letters.append(("x^", parse_frac(tok[2:])))
            else:
                return _fail_config("unknown generator %r" % tok)
        try:
            sys.stdout.write(normal_order(letters).format() + "\n")
        except ExcludedWeight as exc:
            sys.stderr.write(dumps({"error": "excluded-weight", "message": str(exc)}))
            return 2
        return 0
    if args.series is not None:
        try:
            mode, h0_s, order_s = args.series.split(",")
            h0 = parse_frac(h0_s)
            order = int(order_s)
        except ValueError:
            return _fail_config("--series wants mode,h0,order")
        try:
            out = series_solutions(mode.strip(), h0, order)
        except (ExcludedWeight, ValueError) as exc:
            sys.stderr.write(dumps({"error": "excluded-weight", "message": str(exc)}))
            return 2
        if isinstance(out, list):
            sys.stdout.write(dumps({"mode": mode, "coefficients":
                                    [frac_str(c) for c in out]}))
        elif isinstance(out, NOSeries):
            sys.stdout.write(out.format() + "\n")
        elif isinstance(out, LogOperator):
            sys.stdout.write(dumps({
                "mode": "log_op", "h0": frac_str(out.h0),
                "regular": out.regular.format(),
                "logBranch": out.log_branch.format(),
                "yPower": out.y_power,
                "prefactorExponent": frac_str(out.prefactor_exponent),
                "scale": frac_str(out.scale),
            }))
        else:  # FrobeniusPair
            sys.stdout.write(dumps({
                "mode": "frobenius", "h0": frac_str(out.h0),
                "regular": [frac_str(c) for c in out.regular],
                "logPart": [frac_str(c) for c in out.log_part],
            }))
        return 0
    return _fail_config("algebra needs one of --product/--word/--series")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="tractorcalc",
        description="Exact tractor exterior calculus on the flat "
                    "Poincare-Einstein model")
    sub = ap.add_subparsers(dest="command")

    v = sub.add_parser("verify", help="run the exact identity suite")
    v.add_argument("--seed", type=int, default=7)
    tier = v.add_mutually_exclusive_group()
    tier.add_argument("--quick", action="store_true", default=True)
    tier.add_argument("--full", action="store_true")
    v.add_argument("--module", action="append",
                   choices=("model", "sl2core", "tractor", "solver", "boundary"))
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("solve", help="solve a Proca problem spec (JSON)")
    s.add_argument("--spec", required=True)
    s.add_argument("--backend", default="auto",
                   choices=("auto", "tractor", "oracle", "product", "glStep"))
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    o = sub.add_parser("obstruction", help="boundary operators L/G/Q/factor")
    o.add_argument("--op", required=True, choices=("L", "G", "Q", "factor"))
    o.add_argument("--n", type=int, required=True)
    o.add_argument("--k", type=int, required=True)
    o.add_argument("--l", type=int, default=1)
    o.add_argument("--probe", required=True, help="probe JSON file")
    o.set_defaults(func=cmd_obstruction)

    a = sub.add_parser("algebra", help="normal-ordering queries")
    a.add_argument("--product", type=int, help="Casimir-shift product c_1..c_l")
    a.add_argument("--word", help="comma-separated generators, e.g. y,x,y,x")
    a.add_argument("--series", help="mode,h0,order for series_solutions")
    a.set_defaults(func=cmd_algebra)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if not getattr(args, "func", None):
        ap.print_help()
        return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
