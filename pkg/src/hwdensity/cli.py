"""Command-line interface: ``hwdensity {saddle,density,compare,asian,levy-check}``.

Exit codes: 0 success, 1 usage error, 2 domain or convergence error.
Numbers are printed in log-space; ``--linear`` adds linear values where they
are representable doubles.
"""

from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import asian
from .asymptotics import (
    LogDensity,
    Method,
    density_main,
    density_rough,
    levy_density,
    log_density_crude,
)
from .errors import HWError, ToleranceNotMet
from .inversion import (
    DEFAULT_MAX_NODES,
    DEFAULT_REL_TOL,
    ContourSpec,
    levy_oracle,
    oracle_density,
    real_line_density,
)
from .saddle import from_sp_identity, solve_saddle
from .specfun import HwParams

ENV_REL_TOL = "HW_REL_TOL"
ORACLE_MIN_T = 1e-3
LEVY_GRID = (0.05, 0.1, 0.5, 1.0, 2.0, 5.0)
CSV_HEADER = [
    "t", "r", "u0", "log_f_main", "log_f_rough", "log_f_crude",
    "log_f_oracle", "rel_log_gap_main", "warnings",
]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return x


def _finite(text: str) -> float:
    try:
        x = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"must be finite: {text!r}")
    return x


def _fmt(x: float | None) -> str:
    return "" if x is None else "%.16e" % x


def resolve_rel_tol(flag: float | None, environ=os.environ) -> float:
    """Flag beats ``HW_REL_TOL`` beats the library default."""
    if flag is not None:
        return flag
    raw = environ.get(ENV_REL_TOL)
    if raw is None or raw.strip() == "":
        return DEFAULT_REL_TOL
    try:
        value = float(raw)
    except ValueError:
        raise UsageError(f"{ENV_REL_TOL}={raw!r} is not a number") from None
    if not 0.0 < value < 1.0:
        raise UsageError(f"{ENV_REL_TOL}={raw!r} must lie in (0, 1)")
    return value


def _contour(args) -> ContourSpec:
    return ContourSpec(rel_tol=resolve_rel_tol(args.rel_tol), max_nodes=args.max_nodes)


def _print_density(d: LogDensity, linear: bool, out) -> None:
    print(f"method     {d.method.value}", file=out)
    print(f"log_value  {d.log_value:.16e}", file=out)
    if d.rel_error is not None:
        print(f"rel_error  {d.rel_error:.3e}", file=out)
    if linear and d.value is not None:
        print(f"value      {d.value:.16e}", file=out)


def oracle_with_fallback(t: float, params: HwParams, spec: ContourSpec) -> tuple[LogDensity, str]:
    """Contour oracle; on failure, the real-line integral.  Returns (density, warning)."""
    try:
        return oracle_density(t, params, spec), ""
    except ToleranceNotMet as exc:
        d = real_line_density(t, params, rel_tol=max(spec.rel_tol, 1e-12))
        return d, f"contour oracle failed ({exc}); used real-line integral"


# -- subcommands ---------------------------------------------------------------

def cmd_saddle(args, out=None) -> int:
    out = out or sys.stdout
    params = HwParams(args.r)
    sol = solve_saddle(args.t, params)
    print(f"r          {params.r:.16e}", file=out)
    print(f"rho        {params.rho:.16e}", file=out)
    print(f"t          {sol.t:.16e}", file=out)
    print(f"u0         {sol.u0:.16e}", file=out)
    print(f"log_u0     {sol.log_u0:.16e}", file=out)
    print(f"residual   {sol.residual:.3e}", file=out)
    print(f"M          {sol.M_exact:.16e}", file=out)
    print(f"from_sp    {from_sp_identity(sol, params):.3e}", file=out)
    print(f"iterations {sol.iterations}", file=out)
    return 0


def compute_density(method: Method, t: float, params: HwParams, spec: ContourSpec) -> LogDensity:
    if method is Method.MAIN:
        return density_main(t, params)
    if method is Method.ROUGH:
        return density_rough(t, params)
    if method is Method.CRUDE:
        return LogDensity(log_density_crude(t), Method.CRUDE)
    if method is Method.ORACLE:
        return oracle_density(t, params, spec)
    raise UsageError(f"unsupported method {method.value!r}")


def cmd_density(args, out=None) -> int:
    out = out or sys.stdout
    d = compute_density(Method(args.method), args.t, HwParams(args.r), _contour(args))
    _print_density(d, args.linear, out)
    return 0


@dataclass(frozen=True)
class ComparisonRecord:
    t: float
    r: float
    u0: float | None = None
    log_f_main: float | None = None
    log_f_rough: float | None = None
    log_f_crude: float | None = None
    log_f_oracle: float | None = None
    rel_log_gap_main: float | None = None
    warnings: str = ""

    @property
    def ok(self) -> bool:
        return self.log_f_main is not None

    def row(self) -> list[str]:
        return [
            _fmt(self.t), _fmt(self.r), _fmt(self.u0), _fmt(self.log_f_main),
            _fmt(self.log_f_rough), _fmt(self.log_f_crude), _fmt(self.log_f_oracle),
            _fmt(self.rel_log_gap_main), self.warnings,
        ]


def compare_row(t: float, params: HwParams, spec: ContourSpec) -> ComparisonRecord:
    """One comparison row; failures become empty cells plus a warning."""
    cells: dict[str, float | None] = {}
    warnings: list[str] = []

    def attempt(name, fn):
        try:
            cells[name] = fn()
        except HWError as exc:
            warnings.append(f"{name}: {type(exc).__name__}: {exc}")

    sol_box = []

    def u0():
        sol_box.append(solve_saddle(t, params))
        return sol_box[0].u0

    attempt("u0", u0)
    sol = sol_box[0] if sol_box else None
    if sol is not None:
        attempt("log_f_main", lambda: density_main(t, params, sol).log_value)
        attempt("log_f_rough", lambda: density_rough(t, params, sol).log_value)
    attempt("log_f_crude", lambda: log_density_crude(t))
    if t >= ORACLE_MIN_T:
        def oracle():
            d, warn = oracle_with_fallback(t, params, spec)
            if warn:
                warnings.append(warn)
            return d.log_value
        attempt("log_f_oracle", oracle)
    main, orc = cells.get("log_f_main"), cells.get("log_f_oracle")
    gap = abs(main - orc) / abs(orc) if main is not None and orc is not None and orc != 0 else None
    return ComparisonRecord(
        t=t, r=params.r, u0=cells.get("u0"), log_f_main=main,
        log_f_rough=cells.get("log_f_rough"), log_f_crude=cells.get("log_f_crude"),
        log_f_oracle=orc, rel_log_gap_main=gap,
        warnings="; ".join(w.replace("\n", " ") for w in warnings),
    )


def compare_table(ts, r: float, spec: ContourSpec) -> list[ComparisonRecord]:
    params = HwParams(r)
    return [compare_row(float(t), params, spec) for t in ts]


def write_csv(records, stream) -> None:
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for rec in records:
        w.writerow(rec.row())


def _compare_grid(args) -> list[float]:
    if args.grid is not None:
        lo, hi, n = args.grid
        if not (lo > 0 and hi > 0 and n >= 1 and float(n).is_integer()):
            raise UsageError("--grid needs positive endpoints and a positive integer count")
        return [float(x) for x in np.geomspace(lo, hi, int(n))]
    return list(args.t or [])


def cmd_compare(args, out=None) -> int:
    out = out or sys.stdout
    ts = _compare_grid(args)
    if not ts:
        raise UsageError("empty t grid: give --t values or --grid START STOP N")
    records = compare_table(ts, args.r, _contour(args))
    if args.out is None:
        write_csv(records, out)
        summary_to = sys.stderr
    else:
        buf = io.StringIO()
        write_csv(records, buf)
        with open(args.out, "w", newline="") as fh:
            fh.write(buf.getvalue())
        summary_to = out
    gaps = [rec.rel_log_gap_main for rec in records if rec.rel_log_gap_main is not None]
    n_ok = sum(rec.ok for rec in records)
    max_gap = _fmt(max(gaps)) if gaps else "n/a"
    print(f"rows {len(records)}, succeeded {n_ok}, max rel_log_gap_main {max_gap}", file=summary_to)
    return 0 if n_ok >= 1 else 2


def cmd_asian(args, out=None) -> int:
    out = out or sys.stdout
    if not args.u > 0:
        raise UsageError("u must be positive")
    if args.marginal == (args.x is not None):
        raise UsageError("give exactly one of --x or --marginal")
    method = Method(args.method)
    spec = None if args.rel_tol is None and ENV_REL_TOL not in os.environ else _contour(args)
    if args.marginal:
        d = asian.marginal_density(args.t, args.nu, args.u, density_method=method, spec=spec)
    else:
        q = asian.GbmIntegralQuery(args.t, args.nu, args.x, args.u, method, args.auto_threshold)
        d = asian.conditional_density(q, spec)
    _print_density(d, args.linear, out)
    return 0


def cmd_levy_check(args, out=None) -> int:
    out = out or sys.stdout
    spec = _contour(args)
    worst = 0.0
    for t in args.t or LEVY_GRID:
        got = levy_oracle(t, spec).log_value
        exact = levy_density(t).log_value
        rel = abs(math.expm1(got - exact))
        worst = max(worst, rel)
        print(f"t {t:.6e}  log_oracle {got:.16e}  log_exact {exact:.16e}  rel_err {rel:.3e}", file=out)
    print(f"max relative error {worst:.3e}", file=out)
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--rel-tol", type=_positive, default=None,
                        help=f"quadrature tolerance (default ${ENV_REL_TOL} or {DEFAULT_REL_TOL:g})")
    common.add_argument("--max-nodes", type=int, default=DEFAULT_MAX_NODES,
                        help="integrand evaluation budget")
    common.add_argument("--linear", action="store_true", help="also print linear values")

    p = _Parser(prog="hwdensity", description="Hartman-Watson density: asymptotics and inversion.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("saddle", parents=[common], help="solve the saddle-point equation")
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--t", type=_positive, required=True)
    s.set_defaults(func=cmd_saddle)

    s = sub.add_parser("density", parents=[common], help="evaluate log f_r(t)")
    s.add_argument("--r", type=_positive, required=True)
    s.add_argument("--t", type=_positive, required=True)
    s.add_argument("--method", choices=["main", "rough", "crude", "oracle"], default="main")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("compare", parents=[common], help="asymptotics vs oracle table as CSV")
    s.add_argument("--r", type=_positive, required=True)
    g = s.add_mutually_exclusive_group()
    g.add_argument("--t", type=_positive, nargs="*")
    g.add_argument("--grid", type=float, nargs=3, metavar=("START", "STOP", "N"),
                   help="N log-spaced points from START to STOP")
    s.add_argument("--out", default=None, help="CSV path (default stdout)")
    s.set_defaults(func=cmd_compare)

    s = sub.add_parser("asian", parents=[common], help="density of the GBM time integral")
    s.add_argument("--t", type=_positive, required=True)
    s.add_argument("--nu", type=_finite, default=0.0)
    s.add_argument("--u", type=_finite, required=True)
    s.add_argument("--x", type=_finite, default=None)
    s.add_argument("--marginal", action="store_true")
    s.add_argument("--method", choices=["auto", "main", "rough", "oracle"], default="auto")
    s.add_argument("--auto-threshold", type=_positive, default=asian.AUTO_THRESHOLD)
    s.set_defaults(func=cmd_asian)

    s = sub.add_parser("levy-check", parents=[common], help="validate the inversion on the Levy pair")
    s.add_argument("--t", type=_positive, nargs="*")
    s.set_defaults(func=cmd_levy_check)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"hwdensity: error: {exc}", file=sys.stderr)
        return 1
    except HWError as exc:
        print(f"hwdensity: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
