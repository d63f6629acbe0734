"""Analytic zero-energy states of the reduced Dirac operator.

With V(x) = k_v Omega(x) and E = 0 the reduced spinor obeys

    psi'(x) = -A Omega(x) psi(x),    A = sigma_3 k_y + sigma_2 M + i sigma_1 k_v,

so psi = chi * exp(-lambda W(x)) with A chi = lambda chi and W' = Omega.
The full state is Psi = N Omega^{-1/2} exp(i k_y y) chi phi(x).
"""
from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, replace
from functools import lru_cache

import numpy as np

from .conformal import ConformalFactor, reciprocal_integral
from .errors import (
    DegeneracyWarning,
    DegenerateParameterError,
    EmptyRangeError,
    InadmissibleError,
)
from .geometry import SIGMA_1, SIGMA_2, SIGMA_3

__all__ = [
    "PhysicalParams",
    "ZeroMode",
    "spinor_matrix",
    "spinor_eigenpair",
    "admissible",
    "ky_range",
    "degeneracy",
    "build_zero_mode",
    "normalize",
    "probability_density",
    "eigen_residual",
]

# Relative slack on k_v^2 >= k_y^2 + M^2; the same slack snaps lambda to 0 so
# admissible() and the imaginary branch of lambda always agree.  Snapping a gap
# q to zero leaves a scaled eigen-residual of about q / (M + k_v), so this is
# kept a few dozen ulps wide rather than "generous".
ADMISSIBLE_RTOL = 1e-14
_TINY_RATIO = 1e-300


@dataclass(frozen=True)
class PhysicalParams:
    M: float
    k_v: float
    k_y: float = 0.0
    L: float = 2 * math.pi
    sigma: int = 1

    def __post_init__(self):
        for name in ("M", "k_v", "k_y", "L"):
            v = getattr(self, name)
            if not math.isfinite(v):
                raise ValueError(f"{name} must be finite, got {v}")
        if self.M < 0:
            raise ValueError(f"mass M must be >= 0, got {self.M}")
        if not self.L > 0:
            raise ValueError(f"strip length L must be > 0, got {self.L}")
        if self.sigma not in (1, -1):
            raise ValueError(f"sigma must be +1 or -1, got {self.sigma}")

    def with_ky(self, k_y: float) -> "PhysicalParams":
        return replace(self, k_y=k_y)

    def with_sigma(self, sigma: int) -> "PhysicalParams":
        return replace(self, sigma=sigma)

    def ky_quantized(self, m: int) -> float:
        """k_y = 2 pi m / L under periodic boundary conditions in y."""
        return 2 * math.pi * m / self.L


def spinor_matrix(params: PhysicalParams) -> np.ndarray:
    """A = sigma_3 k_y + sigma_2 M + i sigma_1 k_v."""
    return SIGMA_3 * params.k_y + SIGMA_2 * params.M + 1j * SIGMA_1 * params.k_v


def _gap(params: PhysicalParams) -> tuple[float, float]:
    """(k_y^2 + M^2 - k_v^2, tolerance below which it counts as zero)."""
    a = params.k_y**2 + params.M**2
    b = params.k_v**2
    return a - b, ADMISSIBLE_RTOL * max(a, b, np.finfo(float).tiny)


def spinor_eigenpair(params: PhysicalParams) -> tuple[complex, np.ndarray]:
    """lambda_sigma and chi_sigma = (1, i (lambda - k_y) / (M - k_v)).

    lambda uses the principal root: nonnegative real when k_y^2 + M^2 >= k_v^2,
    otherwise i * sqrt(k_v^2 - k_y^2 - M^2), times sigma.

    Because (lambda - k_y)(lambda + k_y) = (M - k_v)(M + k_v), the second
    component also equals i (M + k_v) / (k_y + lambda); whichever denominator
    is larger in magnitude is used, so chi stays accurate as M -> k_v.  When
    both denominators vanish the eigenvector is (0, 1).
    """
    q, tol = _gap(params)
    if abs(q) <= tol:
        q = 0.0
    root = math.sqrt(q) if q >= 0 else 1j * math.sqrt(-q)
    lam = complex(params.sigma * root)
    M, kv, ky = params.M, params.k_v, params.k_y
    den_row1 = M - kv
    den_row2 = ky + lam
    if den_row1 == 0 and den_row2 == 0:
        return lam, np.array([0.0, 1.0], dtype=complex)
    if abs(den_row1) >= abs(den_row2):
        num, den = 1j * (lam - ky), den_row1
    else:
        num, den = 1j * (M + kv), den_row2
    lower = num / den if abs(den) > abs(num) * _TINY_RATIO else math.inf
    if not cmath.isfinite(lower):
        # quotient overflows: same direction, scaled so the second component is unit size
        return lam, np.array([den / abs(num), num / abs(num)], dtype=complex)
    return lam, np.array([1.0, lower], dtype=complex)


def admissible(params: PhysicalParams) -> bool:
    q, tol = _gap(params)
    return q <= tol


def ky_range(params: PhysicalParams) -> tuple[float, float]:
    """Closed interval of k_y admitting a zero mode: [-sqrt(k_v^2 - M^2), sqrt(k_v^2 - M^2)]."""
    d = params.k_v**2 - params.M**2
    if d < -ADMISSIBLE_RTOL * max(params.k_v**2, params.M**2):
        raise EmptyRangeError(f"k_v^2 = {params.k_v**2:g} < M^2 = {params.M**2:g}: no k_y admits a zero mode")
    s = math.sqrt(max(d, 0.0))
    return -s, s


def degeneracy(params: PhysicalParams) -> int:
    """Number of zero modes with k_y = 2 pi m / L: 2 floor(L sqrt(k_v^2 - M^2) / 2 pi) + 1.

    Returns 0 with a :class:`DegeneracyWarning` when k_v^2 < M^2.
    """
    try:
        _, s = ky_range(params)
    except EmptyRangeError as exc:
        warnings.warn(str(exc), DegeneracyWarning, stacklevel=2)
        return 0
    q = params.L * s / (2 * math.pi)
    m_max = math.floor(q)
    # L chosen to make q integral usually lands an ulp below it
    if q - m_max >= 1.0 - ADMISSIBLE_RTOL * max(1.0, q):
        m_max += 1
    return 2 * m_max + 1


@lru_cache(maxsize=128)
def _measure(omega: ConformalFactor) -> float:
    return reciprocal_integral(omega)


def _require_normalizable(params: PhysicalParams) -> None:
    if not admissible(params):
        raise InadmissibleError(
            f"zero mode not normalizable: need k_v^2 >= k_y^2 + M^2, "
            f"got {params.k_v**2:g} < {params.k_y**2 + params.M**2:g} "
            f"(k_v={params.k_v:g}, k_y={params.k_y:g}, M={params.M:g})"
        )
    if params.k_v == params.M:
        raise DegenerateParameterError(
            f"M = k_v = {params.M:g}: spinor norm 2 k_v / (k_v - M) is infinite, state not normalizable"
        )


def normalize(params: PhysicalParams, omega: ConformalFactor) -> float:
    """N = (|chi|^2 L I)^(-1/2), with I = int dx / Omega.

    This enforces int dx dy Omega * rho = 1 where rho = Psi^dagger Psi / Omega.
    """
    _require_normalizable(params)
    _, chi = spinor_eigenpair(params)
    chi2 = float(np.vdot(chi, chi).real)
    return 1.0 / math.sqrt(chi2 * params.L * _measure(omega))


@dataclass(frozen=True)
class ZeroMode:
    lam: complex
    chi: np.ndarray
    norm_constant: float
    params: PhysicalParams
    omega: ConformalFactor

    def phase(self, x):
        """phi(x) = exp(-lambda W(x)), W(0) = 0."""
        return np.exp(-self.lam * self.omega.antiderivative(x))

    def spinor(self, x) -> np.ndarray:
        """Reduced spinor chi * phi(x), shape x.shape + (2,); solves the E = 0 reduced equation."""
        return np.multiply.outer(self.phase(x), self.chi)

    def wavefunction(self, x, y=0.0) -> np.ndarray:
        """Psi(x, y) = N Omega^{-1/2} exp(i k_y y) chi phi(x) (E = 0, so no t dependence)."""
        x = np.asarray(x, dtype=float)
        with np.errstate(over="ignore", invalid="ignore"):
            amp = self.norm_constant / np.sqrt(self.omega.value(x))
            # far out W overflows and the phase is undefined, but the amplitude is already 0
            field = np.where(amp == 0.0, 0.0, amp * self.phase(x))
        field = field * np.exp(1j * self.params.k_y * np.asarray(y))
        return np.multiply.outer(field, self.chi)

    def density(self, x):
        """Scaled density P(x) = Omega * L * rho with rho = Psi^dagger Psi / Omega.

        Admissible modes have Re(lambda) = 0, so |phi| = 1 and P = L N^2 |chi|^2 / Omega.
        """
        chi2 = float(np.vdot(self.chi, self.chi).real)
        with np.errstate(over="ignore"):
            return self.params.L * self.norm_constant**2 * chi2 * self.omega.reciprocal(x)


def build_zero_mode(params: PhysicalParams, omega: ConformalFactor) -> ZeroMode:
    _require_normalizable(params)
    lam, chi = spinor_eigenpair(params)
    return ZeroMode(lam=lam, chi=chi, norm_constant=normalize(params, omega), params=params, omega=omega)


def probability_density(params: PhysicalParams, omega: ConformalFactor, x):
    """P(x) for the normalized zero mode; equals 1 / (Omega(x) I) and integrates to 1."""
    return build_zero_mode(params, omega).density(x)


def eigen_residual(params: PhysicalParams) -> float:
    """||A chi - lambda chi||_inf for the pair returned by :func:`spinor_eigenpair`."""
    lam, chi = spinor_eigenpair(params)
    return float(np.max(np.abs(spinor_matrix(params) @ chi - lam * chi)))

