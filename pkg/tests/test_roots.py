from __future__ import annotations

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcoupling.errors import AccuracyError, BracketError, DomainError
from abcoupling.numerics import Bracket, Tolerance, bessel_j, find_root, scan_brackets

TIGHT = Tolerance(rel=4e-16, abs=0.0)


def test_bracket_validation():
    with pytest.raises(DomainError):
        Bracket(1.0, 1.0)
    with pytest.raises(DomainError):
        Bracket(2.0, 1.0)
    with pytest.raises(DomainError):
        Bracket(0.0, math.inf)


def test_examples():
    assert find_root(lambda x: x - 1.0, Bracket(0.0, 2.0)) == pytest.approx(1.0, abs=1e-12)
    assert find_root(lambda x: bessel_j(0, x), Bracket(2.0, 3.0), TIGHT) == pytest.approx(2.404825557695773, abs=1e-12)
    assert find_root(lambda x: bessel_j(1, x), Bracket(3.0, 4.0), TIGHT) == pytest.approx(3.831705970207512, abs=1e-12)


def test_no_sign_change():
    with pytest.raises(BracketError):
        find_root(lambda x: x * x + 1.0, Bracket(-1.0, 1.0))


def test_iteration_cap():
    with pytest.raises(AccuracyError):
        find_root(lambda x: x ** 3 - 2.0, Bracket(0.0, 100.0), TIGHT, max_iter=3)


def test_exact_endpoint_root():
    assert find_root(lambda x: x, Bracket(0.0, 1.0)) == 0.0


@pytest.mark.parametrize("c", [1e-6, 1.0, 1e6])
def test_scale_invariance(c):
    base = find_root(lambda x: bessel_j(2, x), Bracket(4.0, 6.0), TIGHT)
    assert find_root(lambda x: c * bessel_j(2, x), Bracket(4.0, 6.0), TIGHT) == base


@given(st.floats(-50.0, 50.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_root_stays_inside_and_converges(root, left, right):
    seen = []

    def f(x):
        seen.append(x)
        return math.atan(x - root) + 0.1 * (x - root) ** 3

    lo, hi = root - left, root + right
    x = find_root(f, Bracket(lo, hi))
    assert all(lo <= s <= hi for s in seen)
    assert abs(x - root) <= 1e-12 * max(1.0, abs(root)) + 4e-15 * abs(root)


def test_scan_brackets_finds_all_sign_changes():
    grid = [0.1 * i for i in range(1, 200)]
    roots = [find_root(lambda x: bessel_j(0, x), b, TIGHT) for b in scan_brackets(lambda x: bessel_j(0, x), grid)]
    assert len(roots) == 6
    assert roots[0] == pytest.approx(2.404825557695773, abs=1e-14)


def test_scan_brackets_exact_grid_zero():
    brackets = list(scan_brackets(lambda x: x - 1.0, [0.0, 0.5, 1.0, 1.5]))
    assert brackets == [Bracket(0.5, 1.0)]
