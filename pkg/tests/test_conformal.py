import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from diraczero.conformal import (
    REGISTRY,
    ConformalFactor,
    CoshPower,
    PolynomialEven,
    Tabulated,
    antiderivative,
    evaluate,
    evaluate_checked,
    reciprocal_integral,
)
from diraczero.errors import DivergenceError, DomainError, OutOfHullError


@pytest.mark.parametrize(
    "omega, x, expected",
    [
        (PolynomialEven(omega=1, c=1, n=1), 2.0, (5.0, 4.0)),
        (CoshPower(alpha=1, n=3), 0.0, (1.0, 0.0)),
        (PolynomialEven(omega=1, c=1, n=3), 1.0, (2.0, 6.0)),
    ],
)
def test_evaluate_examples(omega, x, expected):
    value, slope = evaluate(omega, x)
    assert value == pytest.approx(expected[0], abs=1e-15)
    assert slope == pytest.approx(expected[1], abs=1e-15)


@pytest.mark.parametrize(
    "omega, x, expected",
    [
        (PolynomialEven(n=1), 1.0, 4 / 3),
        (CoshPower(n=1), 1.0, math.sinh(1.0)),
    ],
)
def test_antiderivative_examples(omega, x, expected):
    assert antiderivative(omega, x) == pytest.approx(expected, rel=1e-14)


@pytest.mark.parametrize("key", sorted(REGISTRY))
def test_antiderivative_vanishes_at_origin(key):
    assert antiderivative(REGISTRY[key], 0.0) == 0.0


@pytest.mark.parametrize(
    "key, expected",
    [
        ("poly_n1", math.pi),
        ("poly_n2", math.pi / math.sqrt(2)),
        ("poly_n3", 2 * math.pi / 3),
        ("cosh_n1", math.pi),
        ("cosh_n2", 2.0),
        ("cosh_n3", math.pi / 2),
    ],
)
def test_reciprocal_integral_values(key, expected):
    assert reciprocal_integral(REGISTRY[key]) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("key", sorted(REGISTRY))
def test_reciprocal_integral_against_plain_quad(key):
    # independent route: scipy's own infinite-interval transform on the raw callable
    omega = REGISTRY[key]
    with np.errstate(over="ignore"):
        ref, _ = quad(lambda t: 1.0 / float(omega.value(t)), -np.inf, np.inf, epsabs=0, epsrel=1e-12, limit=500)
    assert reciprocal_integral(omega) == pytest.approx(ref, rel=1e-9)


@given(
    w=st.floats(0.1, 10.0),
    c=st.floats(0.1, 10.0),
    n=st.integers(1, 3),
)
@settings(max_examples=30, deadline=None)
def test_polynomial_closed_form_scaling(w, c, n):
    omega = PolynomialEven(omega=w, c=c, n=n)
    # substitute x = (c/w)^(1/2n) u
    expected = (c / w) ** (1 / (2 * n)) / c * PolynomialEven(n=n).closed_form_reciprocal_integral
    assert reciprocal_integral(omega) == pytest.approx(expected, rel=1e-10)


@given(alpha=st.floats(0.2, 5.0), n=st.integers(1, 3))
@settings(max_examples=30, deadline=None)
def test_cosh_closed_form_scaling(alpha, n):
    omega = CoshPower(alpha=alpha, n=n)
    assert reciprocal_integral(omega) == pytest.approx(
        CoshPower(n=n).closed_form_reciprocal_integral / alpha, rel=1e-10
    )


@pytest.mark.parametrize("key", sorted(REGISTRY))
def test_derivative_matches_central_difference(key):
    omega = REGISTRY[key]
    x = np.linspace(-3, 3, 13)
    h = 1e-6
    fd = (omega.value(x + h) - omega.value(x - h)) / (2 * h)
    np.testing.assert_allclose(omega.derivative(x), fd, rtol=1e-7, atol=1e-7)


@pytest.mark.parametrize("key", sorted(REGISTRY))
def test_antiderivative_is_odd_increasing_and_integrates_omega(key):
    omega = REGISTRY[key]
    x = np.linspace(-4, 4, 81)
    W = antiderivative(omega, x)
    np.testing.assert_allclose(W, -W[::-1], atol=1e-12 * np.max(np.abs(W)))
    assert np.all(np.diff(W) > 0)
    h = 1e-5
    dW = (antiderivative(omega, x + h) - antiderivative(omega, x - h)) / (2 * h)
    np.testing.assert_allclose(dW, omega.value(x), rtol=1e-7)


def test_reciprocal_is_stable_far_out():
    omega = CoshPower(n=3)
    r = omega.reciprocal(np.array([800.0, -800.0]))
    assert np.all(np.isfinite(r)) and np.all(r >= 0)


def test_node_is_rejected_with_message():
    with pytest.raises(DomainError, match="nodeless"):
        PolynomialEven(omega=1, c=0, n=1)


@pytest.mark.parametrize("kwargs", [{"omega": -1.0}, {"n": 0}, {"c": float("nan")}])
def test_polynomial_rejects_bad_parameters(kwargs):
    with pytest.raises(DomainError):
        PolynomialEven(**kwargs)


class _Parabola(ConformalFactor):
    """x^2 with no validation, standing in for a factor with a node."""

    def value(self, x):
        return np.asarray(x, dtype=float) ** 2

    def derivative(self, x):
        return 2 * np.asarray(x, dtype=float)


def test_evaluate_checked_rejects_node():
    with pytest.raises(DomainError):
        evaluate_checked(_Parabola(), 0.0)
    assert evaluate_checked(_Parabola(), 2.0) == (4.0, 4.0)


class TestTabulated:
    x = np.linspace(-50.0, 50.0, 2001)

    def test_interpolates_samples(self):
        tab = Tabulated(self.x, self.x**2 + 1)
        np.testing.assert_allclose(tab.value([0.0, 1.0, 2.5]), [1.0, 2.0, 7.25], rtol=1e-10)

    def test_outside_hull(self):
        tab = Tabulated(self.x, self.x**2 + 1)
        with pytest.raises(OutOfHullError):
            tab.value(60.0)

    def test_reciprocal_integral_with_power_law_tails(self):
        # the fitted tail exponent of x^2 + 1 is slightly below 2 at |x| = 50, hence 1e-4
        tab = Tabulated(self.x, self.x**2 + 1)
        assert reciprocal_integral(tab) == pytest.approx(math.pi, rel=1e-4)

    def test_flat_tail_diverges(self):
        with pytest.raises(DivergenceError):
            reciprocal_integral(Tabulated(self.x, np.ones_like(self.x)))

    def test_rejects_nonpositive_sample(self):
        with pytest.raises(DomainError, match="strictly positive"):
            Tabulated([0, 1, 2, 3], [1.0, 0.0, 1.0, 1.0])

    def test_rejects_unsorted(self):
        with pytest.raises(DomainError):
            Tabulated([0, 2, 1, 3], [1.0, 1.0, 1.0, 1.0])
