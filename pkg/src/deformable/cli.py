"""Command-line front end.

Exit codes: 0 success, 1 usage or parse error (including a failed theorem
hypothesis), 2 numerical failure.
"""

from __future__ import annotations

import argparse
import io
import sys
from typing import Sequence

from .checks import run_checks
from .deform import deform_closed, deform_limit
from .expr import EvalDomainError, ParseError, evaluate, format_number, parse, to_text
from .family import UnsupportedFamilyError
from .integral import FracIntegralSpec, QuadratureError, frac_integral_closed, frac_integral_numeric
from .ode import REPEATED_ROOT_TOL, FracOdeComposed, FracOdeFirstOrder, residual_check, solve_composed, solve_first_order
from .sweep import SweepError, SweepSpec, write_sweep
from .theorems import HypothesisError, Interval, RootNotFoundError, mvt_point, rolle_point, taylor_theta

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
RESIDUAL_TOL = 1e-9


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _alphas(values: Sequence[str]) -> list[float]:
    out = []
    for v in values:
        out.extend(float(x) for x in v.split(",") if x.strip())
    return out


def cmd_deriv(args) -> int:
    if args.limit and args.at is None:
        raise UsageError("--limit needs --at")
    f = parse(args.expr)
    d = deform_closed(f, args.alpha)
    if args.at is None:
        print(to_text(d))
        return EXIT_OK
    print(format_number(evaluate(d, args.at)))
    if args.limit:
        res = deform_limit(f, args.alpha, args.at)
        print(f"limit {format_number(res.value)}")
        for step in res.eps_trace:
            print(f"  eps={step.eps:.6g} forward={step.forward:.17g} backward={step.backward:.17g}")
    return EXIT_OK


def cmd_integ(args) -> int:
    spec = FracIntegralSpec(args.alpha, args.a, parse(args.expr))
    value = frac_integral_numeric(spec, args.t)
    print(format_number(value))
    try:
        closed = frac_integral_closed(spec)
    except UnsupportedFamilyError as exc:
        print(f"closed form: unavailable ({exc})")
        return EXIT_OK
    closed_value = evaluate(closed, args.t)
    print(f"closed form: {to_text(closed)}")
    print(f"closed value: {format_number(closed_value)}")
    print(f"delta: {abs(closed_value - value):.3g}")
    return EXIT_OK


def cmd_solve(args) -> int:
    if args.kind == "first-order":
        if args.alpha is None:
            raise UsageError("first-order needs --alpha")
        ode = FracOdeFirstOrder(args.alpha, parse(args.P), parse(args.Q))
        sol = solve_first_order(ode)
    else:
        if args.alpha1 is None or args.alpha2 is None:
            raise UsageError("composed needs --alpha1 and --alpha2")
        ode = FracOdeComposed(args.alpha1, args.alpha2)
        sol = solve_composed(ode)
    if sol.numeric:
        print(f"notice: {sol.note}; using a numeric solution", file=sys.stderr)
    print(f"y(t) = {sol}")
    if sol.roots is not None:
        r1, r2 = sol.roots
        tag = " (repeated)" if abs(r1 - r2) <= REPEATED_ROOT_TOL else ""
        print(f"roots: {format_number(r1)}, {format_number(r2)}{tag}")
    residual = residual_check(sol, ode, [1.0] * len(sol.constants))
    print(f"residual_max: {residual:.3g} (constants = 1)")
    return EXIT_OK if residual <= RESIDUAL_TOL else EXIT_NUMERIC


def _report(rep, label: str) -> None:
    print(f"{label} {format_number(rep.c)}")
    print(f"residual: {rep.residual:.3g}")


def cmd_rolle(args) -> int:
    _report(rolle_point(parse(args.expr), args.alpha, Interval(args.a, args.b), args.tol), "c")
    return EXIT_OK


def cmd_mvt(args) -> int:
    _report(mvt_point(parse(args.expr), args.alpha, Interval(args.a, args.b), args.tol), "c")
    return EXIT_OK


def cmd_taylor(args) -> int:
    h = args.b - args.a
    rep = taylor_theta(parse(args.expr), args.alpha, args.a, h, args.n, args.tol, variant=args.variant)
    _report(rep, "theta")
    return EXIT_OK


def cmd_sweep(args) -> int:
    spec = SweepSpec(parse(args.expr), tuple(_alphas(args.alpha)), args.a, args.b, args.points)
    if args.out == "-":
        rows = write_sweep(spec, sys.stdout)
    else:
        # render first so a domain error leaves no file behind
        buf = io.StringIO()
        rows = write_sweep(spec, buf)
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        print(f"wrote {rows} rows to {args.out}")
    return EXIT_OK


def cmd_check(args) -> int:
    report = run_checks(args.seed)
    sys.stdout.write(report.text(verbose=args.verbose))
    return EXIT_OK if report.ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="deformable", description="Deformable derivative and fractional integral toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("deriv", help="D^alpha of an expression")
    s.add_argument("expr")
    s.add_argument("alpha", type=float)
    s.add_argument("--at", type=float, help="evaluate at this t")
    s.add_argument("--limit", action="store_true", help="also estimate from the limit quotient")
    s.set_defaults(func=cmd_deriv)

    s = sub.add_parser("integ", help="fractional integral I^alpha_a f(t)")
    s.add_argument("expr")
    s.add_argument("alpha", type=float)
    s.add_argument("--from", dest="a", type=float, required=True)
    s.add_argument("--to", dest="t", type=float, required=True)
    s.set_defaults(func=cmd_integ)

    s = sub.add_parser("solve", help="linear fractional ODEs")
    s.add_argument("kind", choices=["first-order", "composed"])
    s.add_argument("--alpha", type=float)
    s.add_argument("--P", default="0")
    s.add_argument("--Q", default="0")
    s.add_argument("--alpha1", type=float)
    s.add_argument("--alpha2", type=float)
    s.set_defaults(func=cmd_solve)

    for name, func, help_text in (
        ("rolle", cmd_rolle, "point with D^alpha f(c) = beta f(c)"),
        ("mvt", cmd_mvt, "mean-value point for D^alpha"),
        ("taylor", cmd_taylor, "Taylor remainder point theta on [from, to]"),
    ):
        s = sub.add_parser(name, help=help_text)
        s.add_argument("expr")
        s.add_argument("--alpha", type=float, required=True)
        s.add_argument("--from", dest="a", type=float, required=True)
        s.add_argument("--to", dest="b", type=float, required=True)
        s.add_argument("--tol", type=float, default=1e-9)
        if name == "taylor":
            s.add_argument("--n", type=int, default=1)
            s.add_argument("--variant", choices=["printed", "derived"], default="printed")
        s.set_defaults(func=func)

    s = sub.add_parser("sweep", help="CSV of D^alpha f over alphas and a t grid")
    s.add_argument("expr")
    s.add_argument("--alpha", nargs="+", required=True, help="alphas, space or comma separated")
    s.add_argument("--from", dest="a", type=float, required=True)
    s.add_argument("--to", dest="b", type=float, required=True)
    s.add_argument("--points", type=int, required=True)
    s.add_argument("--out", default="-", help="output path, '-' for stdout")
    s.set_defaults(func=cmd_sweep)

    s = sub.add_parser("check", help="run the seeded invariant suite")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--verbose", action="store_true", help="show the first failures per family")
    s.set_defaults(func=cmd_check)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, HypothesisError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (EvalDomainError, SweepError, RootNotFoundError, QuadratureError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
