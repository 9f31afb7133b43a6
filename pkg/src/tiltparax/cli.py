"""Command-line entry point.

Exit codes: 0 success, 1 validation/usage error, 2 a ``--check`` diagnostic failed.
"""

from __future__ import annotations

import argparse
import math
import sys

import numpy as np

from . import diagnostics as dg
from .core import BoundaryData, ComplexField2D, Grid1D, PhysicalParams
from .errors import ParaxialError
from .fractional import (
    HalfLineSignal,
    half_derivative_abel,
    half_derivative_spectral,
    sqrt_operator,
)
from .io import RunConfig, export_csv, load_config, read_boundary_samples, write_field
from .solvers import g_from_uin, solve_halfspace, solve_quadrant

SUBCOMMANDS = ("solve-half", "solve-quadrant", "diagnose", "frac-deriv", "compare")

# acceptance thresholds used by `diagnose --check`
ENERGY_TOL = 1e-3
TRANSPARENCY_TOL = 1e-8
HARDY_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def build_parser():
    parser = _Parser(prog="tiltparax", description="Oblique paraxial solver and diagnostics.")
    parser.add_argument("command", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, metavar="PATH")
    parser.add_argument("--out", metavar="PATH", help="CPF1 field output (overrides config)")
    parser.add_argument("--csv", metavar="PATH", help="CSV output (overrides config)")
    parser.add_argument("--check", action="store_true",
                        help="run diagnostics and exit 2 if any assertion fails")
    parser.add_argument("--threads", type=int, default=1, help="FFT worker threads")
    parser.add_argument("--mode", default="abel",
                        choices=("abel", "spectral", "sqrt-spectral", "sqrt-convolution"),
                        help="operator for frac-deriv")
    return parser


def boundary_samples(cfg: RunConfig, grid: Grid1D):
    b = cfg.boundary
    if b.shape == "file":
        return read_boundary_samples(b.path, grid.n)
    y = grid.points
    return b.amplitude * np.exp(-((y - b.center - b.shift_A) ** 2) / (2 * b.width**2))


def _g(cfg):
    return BoundaryData(boundary_samples(cfg, cfg.ygrid), cfg.ygrid, "g")


def _g_plus(cfg):
    y = cfg.ygrid.points
    return BoundaryData(np.where(y > 0, boundary_samples(cfg, cfg.ygrid), 0), cfg.ygrid, "g_plus")


def _write_outputs(field, cfg, args):
    path = args.out or cfg.field_path
    if path:
        write_field(field, path)
    csv_path = args.csv or cfg.csv_path
    if csv_path:
        export_csv(field, csv_path, x_index=0)


def _report(name, value, limit=None):
    if limit is None:
        print(f"{name}: {value:.6e}")
        return True
    ok = value <= limit
    print(f"{name}: {value:.6e} (limit {limit:.1e}) {'PASS' if ok else 'FAIL'}")
    return ok


def run_diagnostics(cfg: RunConfig, args) -> bool:
    p, xg, yg, w = cfg.params, cfg.xgrid, cfg.ygrid, args.threads
    wanted = cfg.diagnostics or frozenset(("stability", "transparency", "hardy"))
    ok = True
    if "energy" in wanted:
        uin = _g(cfg).with_kind("u_in")
        sol = solve_halfspace(g_from_uin(uin, p), xg, p, w)
        rep = dg.energy_balance(sol, uin, p)
        ok &= _report("energy identity 1 residual", rep.identity1.relative_residual, ENERGY_TOL)
        ok &= _report("energy identity 2 residual", rep.identity2.relative_residual, ENERGY_TOL)
    if "stability" in wanted:
        g = _g(cfg)
        try:
            ratio, bound = dg.stability_ratio(solve_halfspace(g, xg, p, w), g, p)
            print(f"stability ratio: {ratio:.6e} (bound {bound:.6e}) PASS")
        except AssertionError as exc:
            print(f"stability: {exc} FAIL")
            ok = False
    if "transparency" in wanted:
        gp = _g_plus(cfg)
        err = dg.transparency_error(solve_quadrant(gp, xg, p, w),
                                    solve_halfspace(gp.with_kind("g"), xg, p, w))
        ok &= _report("transparency error", err, TRANSPARENCY_TOL if p.ky > 0 else None)
    if "hardy" in wanted:
        gp = _g_plus(cfg)
        sol = solve_halfspace(gp.with_kind("g"), xg, p, w)
        leak = dg.hardy_support_check(sol.trace0, p, any_sign=True)
        ok &= _report("trace leakage into y<0", leak, HARDY_TOL if p.ky > 0 else None)
    if "paraxiality" in wanted:
        sol = solve_halfspace(_g(cfg), xg, p, w)
        _report("paraxiality |k.grad u|/|u|", dg.paraxiality_measure(sol, p))
    if "decay" in wanted:
        if p.ky < 0:
            b = cfg.boundary
            h = BoundaryData(np.where(yg.points > 0, boundary_samples(cfg, yg), 0), yg, "g_plus")
            shifts = [k * b.width for k in (2, 4, 8, 16)]
            shifts = [round(a / yg.dx) * yg.dx for a in shifts]
            table = dg.absorbing_decay(h, shifts, p, xg, w)
            for a, err, bound in table.rows:
                print(f"decay A={a:g}: err {err:.6e} bound {bound:.6e}")
            good = table.dominated() and table.nonincreasing()
            print(f"absorbing decay {'PASS' if good else 'FAIL'}")
            ok &= good
            csv_path = args.csv or cfg.csv_path
            if csv_path:
                export_csv(table, csv_path)
        else:
            print("absorbing decay: skipped (needs ky < 0)")
    return ok


def run_frac(cfg: RunConfig, args):
    grid = Grid1D(cfg.xgrid.n, 0.0, cfg.xgrid.dx)
    f = HalfLineSignal(boundary_samples(cfg, grid), grid)
    if args.mode == "abel":
        out = half_derivative_abel(f)
    elif args.mode == "spectral":
        out = half_derivative_spectral(f, workers=args.threads)
    else:
        out = sqrt_operator(f, cfg.params, args.mode.split("-", 1)[1], workers=args.threads)
    csv_path = args.csv or cfg.csv_path
    if csv_path:
        export_csv((grid.points, 0.0, out.samples), csv_path)
    print(f"{args.mode}: L2 norm {math.sqrt(np.sum(np.abs(out.samples) ** 2) * grid.dx):.6e}")


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        cfg = load_config(args.config)
        p, xg, w = cfg.params, cfg.xgrid, args.threads
        if args.command == "solve-half":
            sol = solve_halfspace(_g(cfg), xg, p, w)
            _write_outputs(sol.field, cfg, args)
        elif args.command == "solve-quadrant":
            sol = solve_quadrant(_g_plus(cfg), xg, p, w)
            _write_outputs(sol.field, cfg, args)
        elif args.command == "compare":
            gp = _g_plus(cfg)
            U = solve_quadrant(gp, xg, p, w)
            u = solve_halfspace(gp.with_kind("g"), xg, p, w)
            print(f"transparency error: {dg.transparency_error(U, u):.6e}")
            diff = (U.field.values - u.field.values) * U.ymask
            _write_outputs(ComplexField2D(diff, xg, cfg.ygrid), cfg, args)
        elif args.command == "frac-deriv":
            run_frac(cfg, args)
        elif args.command == "diagnose":
            ok = run_diagnostics(cfg, args)
            if args.check and not ok:
                return 2
    except (ParaxialError, OSError, ValueError) as exc:
        print(f"tiltparax: error: {exc}", file=sys.stderr)
        return 1
    return 0


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
