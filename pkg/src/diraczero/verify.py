"""Acceptance checks AC1-AC8, runnable from the CLI (``diraczero verify``).

Each check compares an implementation route against an independent one
(published closed form, brute-force enumeration, finite differences, or a
second discretization) and records the measured discrepancy next to its
tolerance.
"""
from __future__ import annotations

import math
import platform
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.integrate import trapezoid

from . import __version__
from .config import RunConfig
from .conformal import REGISTRY, CoshPower, PolynomialEven
from .discrete import BACKEND, Grid, assemble, near_zero_eigen, residual
from .errors import DiracZeroError
from .export import profile_table
from .geometry import (
    build_geometry,
    christoffel_oracle,
    flat_clifford_violation,
    spin_connection_oracle,
    spinor_connection_from_spin,
    verify_clifford,
    vielbein_violation,
)
from .zeromode import (
    PhysicalParams,
    admissible,
    build_zero_mode,
    degeneracy,
    normalize,
    spinor_eigenpair,
    spinor_matrix,
)

TWO_PI = 2 * math.pi

# Published normalization constants N(M, k_v, L), keyed by registry name.
PUBLISHED_N: dict[str, Callable[[float, float, float], float]] = {
    "poly_n1": lambda M, kv, L: math.sqrt((kv - M) / (2 * math.pi * L * kv)),
    "poly_n2": lambda M, kv, L: math.sqrt((kv - M) / (math.sqrt(2) * math.pi * L * kv)),
    "poly_n3": lambda M, kv, L: math.sqrt(3 * (kv - M) / (4 * math.pi * L * kv)),
    "cosh_n1": lambda M, kv, L: math.sqrt((kv - M) / (2 * math.pi * L * kv)),
    "cosh_n2": lambda M, kv, L: math.sqrt((kv - M) / (4 * L * kv)),
    "cosh_n3": lambda M, kv, L: math.sqrt((kv - M) / (math.pi * L * kv)),
}

# P(0) = 1 / I for each registry factor.
PEAK_DENSITY = {
    "poly_n1": 1 / math.pi,
    "poly_n2": math.sqrt(2) / math.pi,
    "poly_n3": 3 / (2 * math.pi),
    "cosh_n1": 1 / math.pi,
    "cosh_n2": 0.5,
    "cosh_n3": 2 / math.pi,
}

TOL_NORMALIZATION = 1e-9
TOL_EIGEN = 1e-13
TOL_FD_GEOMETRY = 1e-7
TOL_CLIFFORD = 1e-12
TOL_PEAK = 1e-9
TOL_DENSITY_INTEGRAL = 1e-6
CONVERGENCE_WINDOW = (3.5, 4.5)
KERNEL_SEPARATION = 10.0

TIME_LIMITS = {"AC1": 5.0, "AC2": 5.0, "AC3": 1.0, "AC4": 1.0, "AC5": 2.0, "AC6": 30.0, "AC7": 60.0, "AC8": 5.0}

# Kernel-detection setup and the values measured when it was calibrated.
KERNEL_GRID = Grid(-8.0, 8.0, 2001)
KERNEL_ADMISSIBLE = PhysicalParams(M=1.5, k_v=2.5, k_y=0.0)
KERNEL_CONTROL = PhysicalParams(M=1.5, k_v=0.5, k_y=0.0)
KERNEL_CALIBRATION = {"admissible_min_abs": 0.0902574, "control_min_abs": 1.3513391}

CONVERGENCE_GRID = Grid(-5.0, 5.0, 4001)


@dataclass
class Component:
    label: str
    measured: float
    tolerance: float
    relation: str  # "<=", ">=", "in", "=="
    ok: bool


@dataclass
class Check:
    name: str
    title: str
    provenance: str
    status: str = "pass"
    measured: Optional[float] = None
    tolerance: Optional[object] = None
    components: list[Component] = field(default_factory=list)
    seconds: float = 0.0
    message: str = ""

    def add(self, label: str, measured: float, tolerance, relation: str = "<=") -> bool:
        if relation == "<=":
            ok = measured <= tolerance
        elif relation == ">=":
            ok = measured >= tolerance
        elif relation == "in":
            ok = tolerance[0] <= measured <= tolerance[1]
        elif relation == "==":
            ok = measured == tolerance
        else:
            raise ValueError(relation)
        tol = list(tolerance) if relation == "in" else tolerance
        self.components.append(Component(label, float(measured), tol, relation, bool(ok)))
        return ok

    def finish(self) -> None:
        if self.status == "pass" and not all(c.ok for c in self.components):
            self.status = "fail"
        if self.components:
            first = self.components[0]
            self.measured, self.tolerance = first.measured, first.tolerance

    def line(self) -> str:
        parts = ", ".join(
            f"{c.label}={c.measured:.3e} ({c.relation} {c.tolerance if isinstance(c.tolerance, list) else format(c.tolerance, '.1e')})"
            for c in self.components
        )
        tail = f" -- {self.message}" if self.message else ""
        return f"[{self.status.upper():>18}] {self.name} {self.title}: {parts}{tail} [{self.seconds:.2f}s]"


@dataclass
class VerificationReport:
    checks: list[Check]
    metadata: dict

    @property
    def passed(self) -> bool:
        return all(c.status == "pass" for c in self.checks)

    @property
    def degenerate(self) -> bool:
        return any(c.status == "skipped-degenerate" for c in self.checks)

    def to_dict(self) -> dict:
        """Reproducible part of the report: no wall-clock timings (those live in :meth:`timing`)."""
        checks = []
        for c in self.checks:
            d = asdict(c)
            d.pop("seconds")
            d["components"] = [k for k in d["components"] if k["label"] != "runtime_s"]
            checks.append(d)
        return {"checks": checks}

    def timing(self) -> dict:
        runtimes = {c.name: {"seconds": c.seconds, "limit": TIME_LIMITS.get(c.name)} for c in self.checks}
        return {**self.metadata, "runtimes": runtimes}

    def lines(self) -> list[str]:
        return [c.line() for c in self.checks]


def _tol(default: float, override: Optional[float]) -> float:
    return default if override is None else override


def _rel(a: float, b: float) -> float:
    return abs(a - b) / abs(b)


# --- AC1 / AC2 ----------------------------------------------------------


def random_admissible_draws(rng: np.random.Generator, count: int) -> list[PhysicalParams]:
    out = []
    for _ in range(count):
        M = rng.uniform(0.0, 3.0)
        kv = M + rng.uniform(0.05, 3.0)
        L = rng.uniform(0.5, 20.0)
        ky = rng.uniform(-1.0, 1.0) * math.sqrt(kv * kv - M * M)
        out.append(PhysicalParams(M=M, k_v=kv, k_y=ky, L=L))
    return out


def _normalization_check(name, title, keys, anchor, rng, draws, tol):
    chk = Check(name, title, "adaptive quadrature of int dx/Omega vs published closed-form N")
    points = [anchor] + random_admissible_draws(rng, draws)
    worst = 0.0
    for key in keys:
        for p in points:
            n_quad = normalize(p, REGISTRY[key])
            worst = max(worst, _rel(n_quad, PUBLISHED_N[key](p.M, p.k_v, p.L)))
    chk.add("max_rel_error", worst, tol)
    chk.message = f"{len(keys)} factors x {len(points)} parameter points"
    return chk


# --- AC3 ----------------------------------------------------------------


def enumerate_degeneracy(M: float, k_v: float, L: float) -> int:
    """Brute force: count integers m with k_y = 2 pi m / L admissible."""
    bound = int(math.ceil(L * abs(k_v) / TWO_PI)) + 2
    return sum(admissible(PhysicalParams(M=M, k_v=k_v, k_y=TWO_PI * m / L, L=L)) for m in range(-bound, bound + 1))


def degeneracy_cases(rng: np.random.Generator, count: int = 500, boundary: int = 25) -> list[tuple[float, float, float]]:
    cases = [(1.5, 2.5, TWO_PI)]
    for _ in range(count):
        M = rng.uniform(0.0, 3.0)
        cases.append((M, M + rng.uniform(0.01, 4.0), rng.uniform(0.5, 30.0)))
    # L * sqrt(k_v^2 - M^2) / 2 pi exactly integral
    for _ in range(boundary):
        M = rng.uniform(0.0, 3.0)
        kv = M + rng.uniform(0.1, 4.0)
        j = int(rng.integers(1, 12))
        cases.append((M, kv, TWO_PI * j / math.sqrt(kv * kv - M * M)))
    return cases


# --- AC4 ----------------------------------------------------------------


def random_eigen_draws(rng: np.random.Generator, count: int) -> list[PhysicalParams]:
    out = []
    for _ in range(count):
        out.append(
            PhysicalParams(
                M=rng.uniform(0.0, 3.0),
                k_v=rng.uniform(-4.0, 4.0),
                k_y=rng.uniform(-4.0, 4.0),
                sigma=int(rng.choice([-1, 1])),
            )
        )
    return out


def scaled_eigen_residual(p: PhysicalParams) -> float:
    """||A chi - lambda chi||_inf / ||chi||_inf (chi carries an arbitrary scale)."""
    lam, chi = spinor_eigenpair(p)
    return float(np.max(np.abs(spinor_matrix(p) @ chi - lam * chi)) / np.max(np.abs(chi)))


# --- AC6 ----------------------------------------------------------------


def convergence_ratios(params: PhysicalParams, omega, grid: Grid = CONVERGENCE_GRID, levels: int = 3) -> list[float]:
    mode = build_zero_mode(params, omega)
    res = []
    g = grid
    for _ in range(levels):
        res.append(residual(params, omega, g, mode))
        g = g.refined()
    return [res[i] / res[i + 1] for i in range(levels - 1)]


# --- AC8 ----------------------------------------------------------------


def density_integral(mode, half_width: float = 40.0, n_core: int = 80001, n_tail: int = 20001) -> float:
    """Trapezoid on [-a, a] plus each tail mapped to theta in [pi/4, pi/2] by x = a tan(theta)."""
    x = np.linspace(-half_width, half_width, n_core)
    core = trapezoid(mode.density(x), x)
    th = np.linspace(math.pi / 4, math.pi / 2, n_tail)
    jac = half_width / np.cos(th) ** 2
    jac[-1] = 0.0 if not np.isfinite(jac[-1]) else jac[-1]
    tails = 0.0
    for sign in (1.0, -1.0):
        xt = sign * half_width * np.tan(th)
        with np.errstate(over="ignore", invalid="ignore", under="ignore"):
            f = mode.density(xt) * jac
        f = np.where(np.isfinite(f), f, 0.0)
        tails += trapezoid(f, th)
    return float(core + tails)


# --- driver -------------------------------------------------------------


def _timed(fn, name: str) -> Check:
    t0 = time.perf_counter()
    chk = fn()
    chk.seconds = time.perf_counter() - t0
    chk.finish()
    limit = TIME_LIMITS[name]
    chk.components.append(Component("runtime_s", chk.seconds, limit, "<=", chk.seconds <= limit))
    if chk.status == "pass" and chk.seconds > limit:
        chk.status = "fail"
    return chk


def run_suite(config: RunConfig, tol: Optional[float] = None) -> VerificationReport:
    """Run AC1-AC8.  ``tol`` replaces every agreement tolerance (not the ratio windows)."""
    tol = config.options.tol if tol is None else tol
    seed = config.options.seed
    p = config.params
    degenerate = p.M == p.k_v
    anchor = PhysicalParams(M=p.M, k_v=p.k_v, k_y=0.0, L=p.L)

    def skipped(name, title, provenance):
        return Check(name, title, provenance, status="skipped-degenerate",
                     message=f"M = k_v = {p.M:g}: normalization undefined")

    def guarded(name, title, provenance, body):
        if degenerate:
            return lambda: skipped(name, title, provenance)

        def run():
            try:
                return body()
            except DiracZeroError as exc:
                return Check(name, title, provenance, status="error", message=f"{type(exc).__name__}: {exc}")
        return run

    def ac1():
        rng = np.random.default_rng([seed, 1])
        return _normalization_check("AC1", "normalization, Omega = x^2n + 1", ["poly_n1", "poly_n2", "poly_n3"],
                                    anchor, rng, config.options.draws, _tol(TOL_NORMALIZATION, tol))

    def ac2():
        rng = np.random.default_rng([seed, 2])
        return _normalization_check("AC2", "normalization, Omega = cosh^n x", ["cosh_n1", "cosh_n2", "cosh_n3"],
                                    anchor, rng, config.options.draws, _tol(TOL_NORMALIZATION, tol))

    def ac3():
        chk = Check("AC3", "degeneracy vs enumeration", "closed-form count vs brute-force enumeration of m")
        rng = np.random.default_rng([seed, 3])
        cases = degeneracy_cases(rng)
        mismatches = sum(degeneracy(PhysicalParams(M=M, k_v=kv, L=L)) != enumerate_degeneracy(M, kv, L)
                         for M, kv, L in cases)
        chk.add("mismatches", mismatches, 0, "==")
        chk.message = f"{len(cases)} cases incl. integral boundary"
        return chk

    def ac4():
        chk = Check("AC4", "spinor eigenpair identity", "explicit 2x2 multiplication")
        rng = np.random.default_rng([seed, 4])
        draws = random_eigen_draws(rng, 1000) + [p, PhysicalParams(M=4.0, k_v=5.0, k_y=3.0)]
        worst = max(scaled_eigen_residual(d) for d in draws)
        n_real = sum(not admissible(d) for d in draws)
        chk.add("max_scaled_residual", worst, _tol(TOL_EIGEN, tol))
        chk.add("real_branch_draws", n_real, 1, ">=")
        chk.add("imag_branch_draws", len(draws) - n_real, 1, ">=")
        return chk

    def ac5():
        chk = Check("AC5", "geometry identities", "closed forms vs central-difference Levi-Civita oracle")
        rng = np.random.default_rng([seed, 5])
        fd = clif = viel = gen = 0.0
        clif = flat_clifford_violation()
        for omega in REGISTRY.values():
            for x in rng.uniform(-10.0, 10.0, 100):
                b = build_geometry(omega, x)
                fd = max(fd, float(np.max(np.abs(christoffel_oracle(omega, x) - b.christoffels))),
                         float(np.max(np.abs(spin_connection_oracle(omega, x) - b.spin_connection))))
                gen = max(gen, float(np.max(np.abs(spinor_connection_from_spin(b.spin_connection) - b.spinor_connection))))
                clif = max(clif, verify_clifford(b))
                viel = max(viel, vielbein_violation(b))
        chk.add("fd_connection_error", fd, _tol(TOL_FD_GEOMETRY, tol))
        chk.add("clifford_violation", clif, _tol(TOL_CLIFFORD, tol))
        chk.add("vielbein_violation", viel, _tol(TOL_CLIFFORD, tol))
        chk.add("spinor_connection_general_vs_closed", gen, _tol(TOL_CLIFFORD, tol))
        return chk

    def ac6():
        chk = Check("AC6", "second-order FD residual of the zero mode",
                    "central-difference reduced operator on nested grids")
        for label, params in (("configured", anchor.with_ky(p.k_y)), ("massless", PhysicalParams(M=0.0, k_v=1.0))):
            for fam, omega in (("poly", PolynomialEven(n=1)), ("cosh", CoshPower(n=1))):
                for i, r in enumerate(convergence_ratios(params, omega)):
                    chk.add(f"{label}_{fam}_ratio{i + 1}", r, CONVERGENCE_WINDOW, "in")
        return chk

    def ac7():
        chk = Check("AC7", "near-zero eigenvalue detection", "shift-invert eigensolve of the truncated operator")
        cosh = CoshPower(n=1)
        adm = abs(near_zero_eigen(assemble(KERNEL_ADMISSIBLE, cosh, KERNEL_GRID), k=4)[0])
        ctl = abs(near_zero_eigen(assemble(KERNEL_CONTROL, cosh, KERNEL_GRID), k=4)[0])
        chk.add("separation", ctl / adm, KERNEL_SEPARATION, ">=")
        chk.message = f"min|E| admissible {adm:.6g}, control {ctl:.6g}"
        return chk

    def ac8():
        chk = Check("AC8", "density profiles", "exported P(x) vs 1/(Omega(0) I), symmetry, trapezoid integral")
        peak = even = integ = 0.0
        min_p = math.inf
        x = np.linspace(-10.0, 10.0, 2001)
        for key, omega in REGISTRY.items():
            mode = build_zero_mode(anchor, omega)
            table = profile_table(mode, x)
            P = table[:, 5]
            peak = max(peak, abs(P[1000] - PEAK_DENSITY[key]))
            even = max(even, float(np.max(np.abs(P - P[::-1]))))
            min_p = min(min_p, float(P.min()))
            integ = max(integ, abs(density_integral(mode) - 1.0))
        chk.add("peak_error", peak, _tol(TOL_PEAK, tol))
        chk.add("odd_part", even, _tol(TOL_PEAK, tol))
        chk.add("integral_error", integ, _tol(TOL_DENSITY_INTEGRAL, tol))
        chk.add("min_P", min_p, 0.0, ">=")
        if min_p <= 0.0:
            chk.status = "fail"
        return chk

    plan = [
        ("AC1", guarded("AC1", "normalization, Omega = x^2n + 1", "quadrature vs closed form", ac1)),
        ("AC2", guarded("AC2", "normalization, Omega = cosh^n x", "quadrature vs closed form", ac2)),
        ("AC3", ac3),
        ("AC4", ac4),
        ("AC5", ac5),
        ("AC6", guarded("AC6", "second-order FD residual of the zero mode", "FD oracle", ac6)),
        ("AC7", ac7),
        ("AC8", guarded("AC8", "density profiles", "quadrature + trapezoid", ac8)),
    ]
    t0 = time.perf_counter()
    checks = [_timed(fn, name) for name, fn in plan]
    metadata = {
        "version": __version__,
        "backend": BACKEND,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "seed": seed,
        "tolerance_override": tol,
        "total_seconds": time.perf_counter() - t0,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
    }
    return VerificationReport(checks=checks, metadata=metadata)
