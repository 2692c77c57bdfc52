"""Command-line front end: point evaluation, grids, the small-x error table and timing.

Exit codes: 0 success, 1 validation mismatch (``table1``), 2 usage or
domain error.  Settings resolve as flags, then ``SYNCFN_*`` environment
variables, then built-in defaults.
"""

from __future__ import annotations

import argparse
import csv
import math
import os
import statistics
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .besselk import bessel_k, bessel_k_asymptotic, bessel_k_convergent
from .errors import CancellationLoss, SyncFnError
from .oracle import QuadratureConfig, f_quadrature, k_nu_quadrature
from .precision import Precision, arith
from .results import EvalResult
from .synchrotron import (NU_SYNCHROTRON, DispatchConfig, Optimal, SmallXTruncation, f_closed,
                          f_eval, f_large_x, f_small_x)

HEADER = ["x", "value", "regime", "order_used", "abs_error_estimate"]
DEFAULT_REL_TOL = 1e-9

# published small-x error table: (x, M, S_M, F_exact, relative error)
TABLE1 = [
    ("0.001", 1, "0.214953", "0.213139", 8.51e-3),
    ("0.001", 2, "0.213139", "0.213139", 1.89e-7),
    ("0.001", 3, "0.213139", "0.213139", 6.65e-12),
    ("0.001", 4, "0.213139", "0.213139", 2.84e-14),
    ("0.001", 5, "0.213139", "0.213139", 3.57e-19),
    ("0.01", 1, "0.463102", "0.444973", 4.07e-2),
    ("0.01", 2, "0.444964", "0.444973", 1.95e-5),
    ("0.01", 3, "0.444973", "0.444973", 1.46e-8),
    ("0.01", 4, "0.444973", "0.444973", 2.93e-10),
    ("0.01", 5, "0.444973", "0.444973", 7.84e-14),
    ("0.05", 1, "0.791893", "0.701572", 1.29e-1),
    ("0.05", 2, "0.701203", "0.701572", 5.26e-4),
    ("0.05", 3, "0.701574", "0.701572", 3.25e-6),
    ("0.05", 4, "0.701572", "0.701572", 1.98e-7),
    ("0.05", 5, "0.701572", "0.701572", 4.42e-10),
]
TABLE1_EPS_RTOL = 0.05
TABLE1_F_ATOL = 1e-6


class UsageError(Exception):
    """Bad arguments or configuration; exit code 2."""


@dataclass(frozen=True)
class GridSpec:
    """Evaluation grid, linear or logarithmic, endpoints included."""

    start: float
    stop: float
    points: int
    log: bool = False

    def __post_init__(self):
        if self.points < 2:
            raise ValueError("a grid needs at least 2 points")
        if not self.start < self.stop:
            raise ValueError("grid start must be below stop")
        if self.log and not self.start > 0:
            raise ValueError("a logarithmic grid needs start > 0")

    def values(self) -> list[float]:
        if self.log:
            pts = np.geomspace(self.start, self.stop, self.points)
        else:
            pts = np.linspace(self.start, self.stop, self.points)
        return [float(v) for v in pts]


DEFAULT_GRID = GridSpec(1e-4, 50.0, 20, log=True)


# -- evaluation ---------------------------------------------------------------

def evaluate(fn: str, x, nu=NU_SYNCHROTRON, rel_tol: float = DEFAULT_REL_TOL,
             precision: Precision = Precision.DOUBLE, regime: str = "auto") -> EvalResult:
    """Evaluate ``F`` or ``K_nu`` at ``x`` through the requested route.

    A forced route that reports cancellation still returns its value; the
    error estimate says how good it is.
    """
    if fn == "F":
        if nu != NU_SYNCHROTRON:
            raise UsageError("F is defined for nu = 5/3 only")
        routes = {
            "auto": lambda: f_eval(x, rel_tol, precision),
            "closed": lambda: f_closed(x, rel_tol, precision),
            "small": lambda: f_small_x(x, SmallXTruncation(DispatchConfig.small_x_terms),
                                       precision),
            "large": lambda: f_large_x(x, Optimal(), precision),
            "oracle": lambda: f_quadrature(x, QuadratureConfig(rel_tol=rel_tol,
                                                               precision=precision)),
        }
    else:
        routes = {
            "auto": lambda: bessel_k(nu, x, rel_tol, precision),
            "closed": lambda: bessel_k_convergent(nu, x, rel_tol, precision),
            "large": lambda: bessel_k_asymptotic(nu, x, precision),
            "oracle": lambda: k_nu_quadrature(nu, x, QuadratureConfig(rel_tol=rel_tol,
                                                                      precision=precision)),
        }
    if regime not in routes:
        raise UsageError(f"regime {regime!r} is not available for {fn}")
    try:
        return routes[regime]()
    except CancellationLoss as exc:
        if exc.result is None:
            raise
        return exc.result


def format_row(x_text: str, res: EvalResult, precision: Precision) -> list[str]:
    A = arith(precision)
    return [x_text, A.fmt(res.value), str(res.regime), str(res.order_used),
            repr(float(res.abs_error_estimate))]


def error_row(x_text: str) -> list[str]:
    return [x_text, "nan", "error", "0", "nan"]


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


# -- subcommands --------------------------------------------------------------

def cmd_eval(args, out) -> int:
    if args.x is None:
        raise UsageError("--x is required")
    A = arith(args.precision)
    x = A.num(args.x)
    if not x > 0 and not (args.fn == "F" and x == 0):
        raise UsageError("x must be positive")
    res = evaluate(args.fn, x, args.nu, args.rel_tol, args.precision, args.regime)
    w = _writer(out)
    w.writerow(HEADER)
    w.writerow(format_row(args.x, res, args.precision))
    return 0


def compute_table1(precision: Precision | str = Precision.EXTENDED) -> list[dict]:
    """Recompute every cell of the published small-x error table.

    ``S_M`` and the reference value for the relative error come from the
    small-x expansion and the closed form in the given precision (the
    smallest quoted errors are below double-precision resolution).  The
    ``F_exact`` column comes from the quadrature oracle.
    """
    A = arith(precision)
    rows = []
    exact_cache = {}
    for x_text, m, s_quoted, f_quoted, eps_quoted in TABLE1:
        x = A.num(x_text)
        if x_text not in exact_cache:
            ref = f_closed(x, 1e-6, precision).value
            oracle = f_quadrature(float(x_text), QuadratureConfig(rel_tol=1e-12)).value
            exact_cache[x_text] = ref, oracle
        ref, oracle = exact_cache[x_text]
        s_m = f_small_x(x, SmallXTruncation(m), precision).value
        eps = float(abs(s_m - ref) / ref)
        rows.append({
            "x": x_text, "M": m,
            "S_M": float(s_m), "S_M_quoted": s_quoted,
            "F_exact": float(oracle), "F_exact_quoted": f_quoted,
            "eps": eps, "eps_quoted": eps_quoted,
            "eps_ok": abs(eps - eps_quoted) <= TABLE1_EPS_RTOL * eps_quoted,
            "F_ok": abs(float(oracle) - float(f_quoted)) <= TABLE1_F_ATOL,
            "S_ok": f"{float(s_m):.6f}" == s_quoted,
        })
    return rows


def cmd_table1(args, out) -> int:
    rows = compute_table1()
    out.write(f"{'x':>6} {'M':>2} {'S_M':>10} {'quoted':>9} {'F_exact':>10} {'quoted':>9} "
              f"{'eps_rel':>10} {'quoted':>9}  status\n")
    bad = []
    for r in rows:
        ok = r["eps_ok"] and r["F_ok"] and r["S_ok"]
        if not ok:
            bad.append(r)
        out.write(f"{r['x']:>6} {r['M']:>2} {r['S_M']:>10.6f} {r['S_M_quoted']:>9} "
                  f"{r['F_exact']:>10.6f} {r['F_exact_quoted']:>9} {r['eps']:>10.3e} "
                  f"{r['eps_quoted']:>9.2e}  {'ok' if ok else 'MISMATCH'}\n")
    if bad:
        cells = ", ".join(f"(x={r['x']}, M={r['M']})" for r in bad)
        sys.stderr.write(f"table1: mismatched cells: {cells}\n")
        return 1
    return 0


def _grid_from_args(args) -> GridSpec:
    if args.start is None or args.stop is None or args.points is None:
        raise UsageError("--start, --stop and --points are required")
    try:
        return GridSpec(args.start, args.stop, args.points, args.log)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def grid_rows(fn, grid: GridSpec, nu, rel_tol, precision, regime) -> list[list[str]]:
    """One CSV row per grid point; failures become ``error`` rows."""
    rows = []
    for x in grid.values():
        x_text = repr(x)
        try:
            res = evaluate(fn, x, nu, rel_tol, precision, regime)
        except UsageError:
            raise
        except (SyncFnError, ArithmeticError, ValueError):
            rows.append(error_row(x_text))
            continue
        rows.append(format_row(x_text, res, precision))
    return rows


def cmd_grid(args, out) -> int:
    grid = _grid_from_args(args)
    rows = grid_rows(args.fn, grid, args.nu, args.rel_tol, args.precision, args.regime)
    w = _writer(out)
    w.writerow(HEADER)
    w.writerows(rows)
    return 0


def _median_time(call, repetitions: int) -> float:
    samples = []
    for _ in range(repetitions):
        t0 = time.perf_counter()
        call()
        samples.append(time.perf_counter() - t0)
    return statistics.median(samples)


def bench_rows(fn, grid: GridSpec, nu, rel_tol, repetitions: int) -> list[list[str]]:
    """Median per-point latency of the dispatched series route and the oracle."""
    if repetitions < 1:
        raise UsageError("repetitions must be at least 1")
    noisy = "true" if repetitions == 1 else "false"
    rows = []
    for x in grid.values():
        series = evaluate(fn, x, nu, rel_tol, Precision.DOUBLE, "auto")
        t_series = _median_time(lambda: evaluate(fn, x, nu, rel_tol, Precision.DOUBLE, "auto"),
                                repetitions)
        t_oracle = _median_time(lambda: evaluate(fn, x, nu, rel_tol, Precision.DOUBLE, "oracle"),
                                repetitions)
        rows.append([repr(x), str(series.regime), f"{t_series:.6e}", f"{t_oracle:.6e}",
                     f"{t_oracle / t_series:.3f}", noisy])
    return rows


def cmd_bench(args, out) -> int:
    if args.start is None and args.stop is None and args.points is None:
        grid = DEFAULT_GRID
    else:
        grid = _grid_from_args(args)
    rows = bench_rows(args.fn, grid, args.nu, args.rel_tol, args.repetitions)
    w = _writer(out)
    w.writerow(["x", "series_regime", "series_median_s", "oracle_median_s", "speedup", "noisy"])
    w.writerows(rows)
    ratios = [float(r[4]) for r in rows]
    sys.stderr.write(f"bench: median speedup {statistics.median(ratios):.1f}x "
                     f"over {len(rows)} points\n")
    return 0


# -- argument handling ----------------------------------------------------------

def _nu(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"invalid order {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--fn", choices=["F", "K"], default="F",
                        help="synchrotron function F or Bessel K_nu (default F)")
    common.add_argument("--nu", type=_nu, default=NU_SYNCHROTRON,
                        help="order of K, e.g. 5/3 or 0.5 (default 5/3)")
    common.add_argument("--rel-tol", type=float, default=None,
                        help=f"relative tolerance (default {DEFAULT_REL_TOL:g})")
    common.add_argument("--precision", choices=[p.value for p in Precision], default=None)
    common.add_argument("--regime", choices=["auto", "closed", "small", "large", "oracle"],
                        default="auto", help="force an evaluation route")
    common.add_argument("--out", default=None, help="write output to this path")
    grid = argparse.ArgumentParser(add_help=False)
    grid.add_argument("--start", type=float)
    grid.add_argument("--stop", type=float)
    grid.add_argument("--points", type=int)
    grid.add_argument("--log", action="store_true", help="logarithmic spacing")

    parser = argparse.ArgumentParser(
        prog="syncfn", description="Synchrotron function and modified Bessel K evaluator.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("eval", parents=[common], help="evaluate at one point")
    p.add_argument("--x", type=str, help="argument (kept as text for extended precision)")
    sub.add_parser("table1", parents=[common], help="reproduce the small-x error table")
    sub.add_parser("grid", parents=[common, grid], help="tabulate on a grid as CSV")
    p = sub.add_parser("bench", parents=[common, grid], help="series vs oracle timing as CSV")
    p.add_argument("--repetitions", type=int, default=5)
    return parser


def _resolve(args) -> None:
    env = os.environ
    if args.rel_tol is None:
        text = env.get("SYNCFN_REL_TOL")
        try:
            args.rel_tol = float(text) if text else DEFAULT_REL_TOL
        except ValueError:
            raise UsageError(f"SYNCFN_REL_TOL is not a number: {text!r}") from None
    if not (args.rel_tol > 0 and math.isfinite(args.rel_tol)):
        raise UsageError("rel-tol must be positive")
    if args.precision is None:
        args.precision = env.get("SYNCFN_PRECISION") or Precision.DOUBLE.value
    try:
        args.precision = Precision(args.precision)
    except ValueError:
        raise UsageError(f"unknown precision {args.precision!r}") from None


COMMANDS = {"eval": cmd_eval, "table1": cmd_table1, "grid": cmd_grid, "bench": cmd_bench}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _resolve(args)
        if args.out:
            try:
                with open(args.out, "w", encoding="utf-8", newline="") as fh:
                    return COMMANDS[args.command](args, fh)
            except OSError as exc:
                raise UsageError(f"cannot write {args.out}: {exc.strerror}") from None
        return COMMANDS[args.command](args, sys.stdout)
    except UsageError as exc:
        sys.stderr.write(f"syncfn: {exc}\n")
        return 2
    except (SyncFnError, ArithmeticError, ValueError) as exc:
        sys.stderr.write(f"syncfn: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
