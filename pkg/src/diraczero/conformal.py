"""Conformal factors Omega(x) for the metric ds^2 = Omega^2 (dt^2 - dx^2) - dy^2.

Three families are supported:

* ``PolynomialEven``  -- Omega = omega * x**(2n) + c
* ``CoshPower``       -- Omega = cosh(alpha * x)**n
* ``Tabulated``       -- cubic interpolation through positive samples

Every factor exposes its value, derivative, antiderivative
W(x) = int_0^x Omega(t) dt and reciprocal 1/Omega; the normalization
integral I = int dx / Omega over the real line is computed by
:func:`reciprocal_integral`.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy import integrate
from scipy.interpolate import CubicSpline
from scipy.special import gammaln

from .errors import DivergenceError, DomainError, OutOfHullError, QuadratureError

__all__ = [
    "ConformalFactor",
    "PolynomialEven",
    "CoshPower",
    "Tabulated",
    "REGISTRY",
    "evaluate",
    "antiderivative",
    "reciprocal_integral",
]

QUAD_RTOL = 1e-12
CLOSED_FORM_RTOL = 1e-10
# Core interval is [-TAIL_SPLIT * scale, TAIL_SPLIT * scale]; beyond it x = split * tan(theta).
TAIL_SPLIT = 10.0


def _quad(f: Callable[[float], float], a: float, b: float, rtol: float = QUAD_RTOL, points=None) -> float:
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, _ = integrate.quad(f, a, b, epsabs=0.0, epsrel=rtol, limit=500, points=points)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature on [{a}, {b}] did not converge: {exc}") from exc
    if not math.isfinite(val):
        raise DivergenceError(f"quadrature on [{a}, {b}] returned {val}")
    return val


class ConformalFactor:
    """Common interface; concrete families are frozen dataclasses below."""

    family: str = ""

    def value(self, x):
        raise NotImplementedError

    def derivative(self, x):
        raise NotImplementedError

    def evaluate(self, x):
        return self.value(x), self.derivative(x)

    def reciprocal(self, x):
        return 1.0 / self.value(x)

    def antiderivative(self, x):
        return _cumulative_quad(self.value, x, 0.0)

    @property
    def closed_form_reciprocal_integral(self) -> Optional[float]:
        return None

    @property
    def scale(self) -> float:
        """Length over which Omega departs appreciably from its minimum."""
        return 1.0

    def describe(self) -> str:
        return self.family

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PolynomialEven(ConformalFactor):
    omega: float = 1.0
    c: float = 1.0
    n: int = 1

    family = "polynomial_even"

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise DomainError(f"PolynomialEven needs a positive integer n, got {self.n!r}")
        if not (math.isfinite(self.omega) and self.omega > 0):
            raise DomainError(f"PolynomialEven needs omega > 0 so that Omega grows at infinity, got omega={self.omega}")
        if not (math.isfinite(self.c) and self.c > 0):
            raise DomainError(
                f"PolynomialEven needs c > 0 so that Omega is nodeless; got c={self.c} "
                f"(Omega(0) = {self.c} is not positive)"
            )

    def value(self, x):
        x = np.asarray(x, dtype=float)
        return self.omega * x ** (2 * self.n) + self.c

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        return 2 * self.n * self.omega * x ** (2 * self.n - 1)

    def antiderivative(self, x):
        x = np.asarray(x, dtype=float)
        k = 2 * self.n + 1
        return self.omega * x**k / k + self.c * x

    @property
    def closed_form_reciprocal_integral(self) -> float:
        # int dx / (c + omega x^{2n}) = (c/omega)^{1/2n} / c * (pi/n) / sin(pi/2n)
        n = self.n
        return (self.c / self.omega) ** (1.0 / (2 * n)) / self.c * (math.pi / n) / math.sin(math.pi / (2 * n))

    @property
    def scale(self) -> float:
        return (self.c / self.omega) ** (1.0 / (2 * self.n))

    def describe(self) -> str:
        return f"{self.omega:g}*x^{2 * self.n}+{self.c:g}"

    def to_dict(self) -> dict:
        return {"family": self.family, "omega": float(self.omega), "c": float(self.c), "n": int(self.n)}


@dataclass(frozen=True)
class CoshPower(ConformalFactor):
    alpha: float = 1.0
    n: int = 1

    family = "cosh_power"

    def __post_init__(self):
        if not (isinstance(self.n, (int, np.integer)) and self.n >= 1):
            raise DomainError(f"CoshPower needs a positive integer n, got {self.n!r}")
        if not (math.isfinite(self.alpha) and self.alpha > 0):
            raise DomainError(f"CoshPower needs alpha > 0, got alpha={self.alpha}")

    def value(self, x):
        return np.cosh(self.alpha * np.asarray(x, dtype=float)) ** self.n

    def derivative(self, x):
        ax = self.alpha * np.asarray(x, dtype=float)
        return self.n * self.alpha * np.cosh(ax) ** (self.n - 1) * np.sinh(ax)

    def reciprocal(self, x):
        # sech written with exp(-|ax|) so the tails underflow to 0 instead of overflowing
        e = np.exp(-np.abs(self.alpha * np.asarray(x, dtype=float)))
        return (2.0 * e / (1.0 + e * e)) ** self.n

    def antiderivative(self, x):
        a = self.alpha
        ax = a * np.asarray(x, dtype=float)
        if self.n == 1:
            return np.sinh(ax) / a
        if self.n == 2:
            return (ax + np.sinh(ax) * np.cosh(ax)) / (2 * a)
        if self.n == 3:
            s = np.sinh(ax)
            return (s + s**3 / 3) / a
        return _cumulative_quad(self.value, x, 0.0)

    @property
    def closed_form_reciprocal_integral(self) -> float:
        # int sech^n = sqrt(pi) Gamma(n/2) / Gamma((n+1)/2) / alpha
        n = self.n
        return math.sqrt(math.pi) * math.exp(gammaln(n / 2) - gammaln((n + 1) / 2)) / self.alpha

    @property
    def scale(self) -> float:
        return 1.0 / self.alpha

    def describe(self) -> str:
        return f"cosh({self.alpha:g}*x)^{self.n}"

    def to_dict(self) -> dict:
        return {"family": self.family, "alpha": float(self.alpha), "n": int(self.n)}


@dataclass(frozen=True)
class Tabulated(ConformalFactor):
    """Omega given by samples; cubic spline in between, undefined outside the hull.

    Tabulated factors make no claim about growth at infinity.  The
    reciprocal integral extrapolates each tail as a power law fitted to the
    outermost samples and raises :class:`DivergenceError` when that power
    does not exceed one.
    """

    x: tuple
    values: tuple
    _spline: CubicSpline = field(init=False, repr=False, compare=False)

    family = "tabulated"

    def __post_init__(self):
        xs = np.asarray(self.x, dtype=float)
        vs = np.asarray(self.values, dtype=float)
        if xs.ndim != 1 or xs.shape != vs.shape or xs.size < 4:
            raise DomainError("Tabulated needs matching 1-D x/values with at least 4 samples")
        if not np.all(np.isfinite(xs)) or not np.all(np.diff(xs) > 0):
            raise DomainError("Tabulated x must be finite and strictly increasing")
        if not np.all(np.isfinite(vs)) or not np.all(vs > 0):
            bad = int(np.argmin(vs))
            raise DomainError(f"Tabulated Omega must be strictly positive; Omega({xs[bad]}) = {vs[bad]}")
        object.__setattr__(self, "x", tuple(float(v) for v in xs))
        object.__setattr__(self, "values", tuple(float(v) for v in vs))
        object.__setattr__(self, "_spline", CubicSpline(xs, vs))

    @property
    def hull(self) -> tuple[float, float]:
        return self.x[0], self.x[-1]

    def _check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        lo, hi = self.hull
        if np.any(x < lo) or np.any(x > hi):
            raise OutOfHullError(f"x outside tabulated hull [{lo}, {hi}]")
        return x

    def value(self, x):
        return self._spline(self._check(x))

    def derivative(self, x):
        return self._spline(self._check(x), 1)

    @property
    def reference_point(self) -> float:
        lo, hi = self.hull
        return 0.0 if lo <= 0.0 <= hi else lo

    def antiderivative(self, x):
        return _cumulative_quad(self.value, self._check(x), self.reference_point)

    @property
    def scale(self) -> float:
        lo, hi = self.hull
        return max(abs(lo), abs(hi))

    def to_dict(self) -> dict:
        return {"family": self.family, "x": list(self.x), "values": list(self.values)}


REGISTRY: dict[str, ConformalFactor] = {
    "poly_n1": PolynomialEven(n=1),
    "poly_n2": PolynomialEven(n=2),
    "poly_n3": PolynomialEven(n=3),
    "cosh_n1": CoshPower(n=1),
    "cosh_n2": CoshPower(n=2),
    "cosh_n3": CoshPower(n=3),
}


def _cumulative_quad(f, x, ref: float) -> np.ndarray:
    """int_ref^x f for every entry of x, as a chain of short adaptive quadratures."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    order = np.argsort(flat)
    out = np.empty_like(flat)
    scalar_f = lambda t: float(f(t))  # noqa: E731
    # walk outwards from ref on each side so every piece is short
    right = [i for i in order if flat[i] >= ref]
    left = [i for i in order[::-1] if flat[i] < ref]
    for seq in (right, left):
        acc, prev = 0.0, ref
        for i in seq:
            if flat[i] != prev:
                acc += _quad(scalar_f, prev, flat[i])
                prev = flat[i]
            out[i] = acc
    return out.reshape(x.shape)


def evaluate(omega: ConformalFactor, x):
    """Return ``(Omega(x), Omega'(x))``."""
    return omega.evaluate(x)


def antiderivative(omega: ConformalFactor, x):
    """W(x) = int_0^x Omega(t) dt (closed form where one is known)."""
    return omega.antiderivative(x)


def reciprocal_integral(omega: ConformalFactor, rtol: float = QUAD_RTOL) -> float:
    """I = int_{-inf}^{inf} dx / Omega(x) by adaptive quadrature.

    The core interval [-s, s] with s = 10 * omega.scale is integrated
    directly; each tail uses x = s * tan(theta) so the polynomially decaying
    integrands stay smooth up to theta = pi/2.  When the family has a closed
    form the quadrature result must agree with it to 1e-10 relative.
    """
    if isinstance(omega, Tabulated):
        return _tabulated_reciprocal_integral(omega, rtol)

    s = TAIL_SPLIT * omega.scale
    knee = omega.scale
    core = _quad(lambda t: float(omega.reciprocal(t)), -s, s, rtol, points=[-knee, 0.0, knee])

    def tail(theta: float, sign: float) -> float:
        c = math.cos(theta)
        return float(omega.reciprocal(sign * s * math.tan(theta))) * s / (c * c)

    quarter, half = math.pi / 4, math.pi / 2
    right = _quad(lambda th: tail(th, 1.0), quarter, half, rtol)
    left = _quad(lambda th: tail(th, -1.0), quarter, half, rtol)
    total = core + right + left

    exact = omega.closed_form_reciprocal_integral
    if exact is not None and abs(total - exact) > CLOSED_FORM_RTOL * abs(exact):
        raise QuadratureError(f"reciprocal integral {total!r} disagrees with closed form {exact!r} for {omega.describe()}")
    return total


def _power_law_tail(xs: np.ndarray, vs: np.ndarray) -> float:
    """int_{|X|}^{inf} dx / Omega for Omega ~ C |x|^p fitted to the outermost samples (X = xs[-1])."""
    ax = np.abs(xs)
    if np.any(ax <= 0) or len(set(np.sign(xs))) != 1:
        raise DivergenceError("cannot estimate tail: outermost samples straddle x = 0")
    p = np.polyfit(np.log(ax), np.log(vs), 1)[0]
    if not p > 1.0 + 1e-6:
        raise DivergenceError(f"tail of 1/Omega does not converge (fitted growth power {p:.3g} <= 1)")
    return float(ax[-1] / ((p - 1.0) * vs[-1]))


def _tabulated_reciprocal_integral(omega: Tabulated, rtol: float) -> float:
    xs = np.asarray(omega.x)
    vs = np.asarray(omega.values)
    # the spline is only piecewise smooth, so integrate knot to knot
    recip = lambda t: float(1.0 / omega._spline(t))  # noqa: E731
    core = math.fsum(_quad(recip, a, b, rtol) for a, b in zip(xs[:-1], xs[1:]))
    k = min(4, len(xs) // 2)
    right = _power_law_tail(xs[-k:], vs[-k:])
    left = _power_law_tail(xs[:k][::-1], vs[:k][::-1])
    return core + right + left


def evaluate_checked(omega: ConformalFactor, x) -> tuple:
    """Like :func:`evaluate` but raises :class:`DomainError` where Omega is not positive."""
    val, der = omega.evaluate(x)
    if np.any(~np.isfinite(val)) or np.any(np.asarray(val) <= 0):
        raise DomainError(f"Omega is not positive and finite at x={x!r} (metric degenerate)")
    return val, der
