"""Command-line entry point: ``diraczero {geometry,zeromode,verify}``.

Exit status: 0 when every check passes, 1 when a check fails, 2 for
configuration or parameter errors.
"""
from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig, load_config
from .discrete import Grid
from .errors import ConfigError, DiracZeroError
from .export import atomic_write_text, dump_json, format_csv, mode_summary, profile_table
from .geometry import (
    build_geometry,
    christoffel_oracle,
    flat_clifford_violation,
    spin_connection_oracle,
    spinor_connection_from_spin,
    verify_clifford,
    vielbein_violation,
)
from .verify import TOL_CLIFFORD, TOL_FD_GEOMETRY, Check, VerificationReport, run_suite
from .zeromode import build_zero_mode
from .zeromode import _measure as measure

log = logging.getLogger("diraczero")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
DEFAULT_GRID = Grid(-5.0, 5.0, 1001)


def _grid(config: RunConfig, grid_n) -> Grid:
    g = config.grid or DEFAULT_GRID
    if grid_n is not None:
        try:
            g = Grid(g.x_min, g.x_max, grid_n)
        except ValueError as exc:
            raise ConfigError(f"--grid-n: {exc}") from None
    return g


def cmd_geometry(config: RunConfig, out: Path, tol=None, grid_n=None) -> VerificationReport:
    """Closed-form geometry vs finite-difference oracles at sample points of the grid."""
    g = _grid(config, None)
    n = grid_n if grid_n is not None else config.options.samples
    xs = np.linspace(g.x_min, g.x_max, n)
    tol = config.options.tol if tol is None else tol
    fd_tol = TOL_FD_GEOMETRY if tol is None else tol
    exact_tol = TOL_CLIFFORD if tol is None else tol
    omega = config.omega

    chris = spin = gen = clif = viel = 0.0
    for x in xs:
        b = build_geometry(omega, x)
        chris = max(chris, float(np.max(np.abs(christoffel_oracle(omega, x) - b.christoffels))))
        spin = max(spin, float(np.max(np.abs(spin_connection_oracle(omega, x) - b.spin_connection))))
        gen = max(gen, float(np.max(np.abs(spinor_connection_from_spin(b.spin_connection) - b.spinor_connection))))
        clif = max(clif, verify_clifford(b))
        viel = max(viel, vielbein_violation(b))

    checks = []
    for name, value, t, prov in (
        ("christoffel_oracle", chris, fd_tol, "Levi-Civita formula with central differences"),
        ("spin_connection_oracle", spin, fd_tol, "e (dE + Gamma E) with central differences"),
        ("spinor_connection_general", gen, exact_tol, "(1/8) omega_ab [gamma^a, gamma^b] vs closed form"),
        ("clifford_curved", clif, exact_tol, "{gamma^mu, gamma^nu} = 2 g^{mu nu}"),
        ("clifford_flat", flat_clifford_violation(), exact_tol, "{gamma^a, gamma^b} = 2 eta^{ab}"),
        ("vielbein_metric", viel, exact_tol, "e^a_mu e^b_nu eta_ab = g_mu_nu"),
    ):
        c = Check(name, omega.describe(), prov)
        c.add("max_abs_error", value, t)
        c.finish()
        checks.append(c)
    report = VerificationReport(checks, {})
    body = {"omega": omega.to_dict(), "samples": int(n), "x_range": [g.x_min, g.x_max], **report.to_dict()}
    atomic_write_text(out / "geometry_report.json", dump_json(body))
    return report


def cmd_zeromode(config: RunConfig, out: Path, grid_n=None) -> dict:
    """Write zeromode.json (lambda, chi, N, degeneracy, ky_range) and zeromode.csv (profile)."""
    mode = build_zero_mode(config.params, config.omega)
    summary = mode_summary(mode, measure(config.omega))
    g = _grid(config, grid_n)
    atomic_write_text(out / "zeromode.json", dump_json(summary))
    atomic_write_text(out / "zeromode.csv", format_csv(profile_table(mode, g.nodes)))
    return summary


def cmd_verify(config: RunConfig, out: Path, tol=None) -> VerificationReport:
    report = run_suite(config, tol=tol)
    atomic_write_text(out / "verify_report.json", dump_json(report.to_dict()))
    atomic_write_text(out / "verify_metadata.json", dump_json(report.timing()))
    return report


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diraczero", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("geometry", "check metric, vielbeins, connections and gamma matrices against FD oracles"),
        ("zeromode", "export the normalized zero mode: JSON summary and CSV profile"),
        ("verify", "run the acceptance suite"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", type=Path, help="INI run configuration (default: built-in x^2+1 example)")
        p.add_argument("--out", type=Path, default=Path("out"), help="output directory (default: ./out)")
        p.add_argument("--tol", type=float, help="override agreement tolerances")
        p.add_argument("--grid-n", type=int, help="override the number of grid points / samples")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        config = load_config(args.config) if args.config else DEFAULT_CONFIG
        if args.tol is not None:
            if not args.tol >= 0:
                raise ConfigError(f"--tol must be >= 0, got {args.tol}")
            config = replace(config, options=replace(config.options, tol=args.tol))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if args.command == "zeromode":
            summary = cmd_zeromode(config, args.out, args.grid_n)
            print(f"lambda = {complex(*summary['lambda'])}, N = {summary['N']:.17g}, "
                  f"degeneracy = {summary['degeneracy']}, wrote {args.out}/zeromode.{{json,csv}}")
            return EXIT_OK
        if args.command == "geometry":
            report = cmd_geometry(config, args.out, args.tol, args.grid_n)
        else:
            report = cmd_verify(config, args.out, args.tol)
    except (ConfigError, DiracZeroError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    for line in report.lines():
        print(line)
    statuses = {c.status for c in report.checks}
    if statuses == {"pass"}:
        return EXIT_OK
    if "fail" in statuses:
        return EXIT_FAIL
    if "skipped-degenerate" in statuses:
        print("error: degenerate parameters (M == k_v); affected checks skipped", file=sys.stderr)
    return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
