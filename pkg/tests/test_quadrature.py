from __future__ import annotations

import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcoupling.errors import AccuracyError, DomainError
from abcoupling.numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    bessel_j,
    bessel_k,
    gauss_kronrod_15,
    integrate_finite,
    integrate_semi_infinite,
)

J01 = 2.404825557695773


def test_tolerance_defaults_and_validation():
    assert (DEFAULT_TOLERANCE.rel, DEFAULT_TOLERANCE.abs, DEFAULT_TOLERANCE.max_depth) == (1e-12, 1e-15, 60)
    for bad in [dict(rel=0.0), dict(rel=-1.0), dict(abs=-1e-3), dict(max_depth=0), dict(max_depth=2.5)]:
        with pytest.raises(DomainError):
            Tolerance(**bad)


def test_simple_examples():
    assert integrate_finite(lambda t: t, 0.0, 1.0) == pytest.approx(0.5, rel=1e-15)
    assert integrate_finite(lambda t: 0.0 * math.sin(t + 0.3), 0.0, 2.0) == 0.0
    assert integrate_finite(lambda t: t, 1.5, 1.5) == 0.0
    with pytest.raises(DomainError):
        integrate_finite(lambda t: t, 1.0, 0.0)


def test_j0_squared_identity():
    got = integrate_finite(lambda t: bessel_j(0, t) ** 2 * t, 0.0, J01)
    expected = 0.5 * J01 * J01 * bessel_j(1, J01) ** 2
    assert got == pytest.approx(expected, rel=1e-12)


def test_semi_infinite_examples():
    assert integrate_semi_infinite(lambda r: math.exp(-2.0 * r), 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)
    assert integrate_semi_infinite(lambda r: 0.0, 0.0, 1.0) == 0.0
    got = integrate_semi_infinite(lambda r: bessel_k(0, r) ** 2 * r, 1.0, 1.0)
    expected = 0.5 * (bessel_k(1, 1.0) ** 2 - bessel_k(0, 1.0) ** 2)
    assert got == pytest.approx(expected, rel=1e-12)
    with pytest.raises(DomainError):
        integrate_semi_infinite(lambda r: 0.0, 0.0, 0.0)


def test_error_estimate_returned():
    value, err = integrate_finite(math.exp, 0.0, 1.0, DEFAULT_TOLERANCE, with_error=True)
    assert abs(value - (math.e - 1.0)) <= max(err, 1e-15)
    assert err <= DEFAULT_TOLERANCE.target(value)
    value, err = integrate_semi_infinite(lambda r: math.exp(-r), 0.0, 0.5, DEFAULT_TOLERANCE, with_error=True)
    assert abs(value - 1.0) <= 1e-12
    assert err >= 0.0


def test_non_convergence_raises_with_estimate():
    tol = Tolerance(rel=1e-14, abs=0.0, max_depth=2)
    with pytest.raises(AccuracyError) as info:
        integrate_finite(lambda t: math.sin(1.0 / t) if t > 0 else 0.0, 0.0, 1.0, tol)
    assert math.isfinite(info.value.estimate)
    assert info.value.error > 0.0


def test_kronrod_panel_exact_for_polynomials():
    # K15 integrates degree <= 22 exactly, G7 degree <= 13
    k, err, absval = gauss_kronrod_15(lambda t: t ** 13 - 3 * t ** 4, -1.0, 2.0)
    exact = (2.0 ** 14 - 1.0) / 14.0 - 3.0 * (2.0 ** 5 + 1.0) / 5.0
    assert k == pytest.approx(exact, rel=1e-14)
    assert err <= 1e-10 * abs(exact)
    assert absval >= abs(k)


@pytest.mark.parametrize("l", range(7))
def test_bessel_quadrature_identity(l):
    for i in range(1, 31):
        x = float(i)
        lhs = 2.0 / (x * x) * integrate_finite(lambda t: bessel_j(l, t) ** 2 * t, 0.0, x)
        rhs = bessel_j(l, x) ** 2 - bessel_j(l - 1, x) * bessel_j(l + 1, x)
        assert lhs == pytest.approx(rhs, rel=1e-10)


def test_mpmath_oracle_oscillatory():
    mpmath.mp.dps = 30
    f = lambda t: math.cos(40.0 * t) * math.exp(-t)
    ref = float(mpmath.quad(lambda t: mpmath.cos(40 * t) * mpmath.exp(-t), [0, 3]))
    assert integrate_finite(f, 0.0, 3.0) == pytest.approx(ref, rel=1e-11, abs=1e-15)


@given(st.floats(0.05, 20.0), st.floats(-5.0, 5.0))
def test_semi_infinite_exponential_property(rate, lo):
    got = integrate_semi_infinite(lambda r: math.exp(-2.0 * rate * (r - lo)), lo, rate)
    assert got == pytest.approx(1.0 / (2.0 * rate), rel=1e-11)


@given(st.floats(-10.0, 10.0), st.floats(0.01, 10.0), st.floats(0.1, 1e6))
def test_linearity_property(lo, width, c):
    f = lambda t: math.sin(t) + t * t
    base = integrate_finite(f, lo, lo + width)
    scaled = integrate_finite(lambda t: c * f(t), lo, lo + width)
    assert scaled == pytest.approx(c * base, rel=1e-11, abs=1e-13 * c)
