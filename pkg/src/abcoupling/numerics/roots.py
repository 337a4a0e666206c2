"""Safeguarded bracketing root finder (Brent's zeroin)."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

from ..errors import AccuracyError, BracketError, DomainError
from .quadrature import DEFAULT_TOLERANCE, Tolerance

_EPS = 2.220446049250313e-16


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError(f"bracket ends must be finite, got [{self.lo!r}, {self.hi!r}]")
        if not self.lo < self.hi:
            raise DomainError(f"bracket needs lo < hi, got [{self.lo!r}, {self.hi!r}]")


def find_root(
    f: Callable[[float], float],
    bracket: Bracket,
    tol: Tolerance = DEFAULT_TOLERANCE,
    max_iter: int = 200,
) -> float:
    """Root of ``f`` inside ``bracket`` by Brent's method.

    Iterates until the enclosing interval is narrower than
    ``tol.rel*|x| + tol.abs`` (never below a few ulps) or ``f`` hits zero
    exactly.  Every iterate stays inside the current sign-change interval.
    """
    a, b = float(bracket.lo), float(bracket.hi)
    fa, fb = f(a), f(b)
    if fa == 0.0:
        return a
    if fb == 0.0:
        return b
    if not (math.isfinite(fa) and math.isfinite(fb)):
        raise BracketError(f"f is not finite at the bracket ends [{a!r}, {b!r}]")
    if (fa > 0.0) == (fb > 0.0):
        raise BracketError(f"no sign change on [{a!r}, {b!r}]: f(lo)={fa!r}, f(hi)={fb!r}")

    c, fc = a, fa
    d = e = b - a
    for _ in range(max_iter):
        if (fb > 0.0) == (fc > 0.0):
            c, fc = a, fa
            d = e = b - a
        if abs(fc) < abs(fb):
            a, b, c = b, c, b
            fa, fb, fc = fb, fc, fb
        tol1 = 2.0 * _EPS * abs(b) + 0.5 * (tol.rel * abs(b) + tol.abs)
        xm = 0.5 * (c - b)
        if abs(xm) <= tol1 or fb == 0.0:
            return b
        if abs(e) >= tol1 and abs(fa) > abs(fb):
            s = fb / fa
            if a == c:
                p = 2.0 * xm * s
                q = 1.0 - s
            else:
                q = fa / fc
                r = fb / fc
                p = s * (2.0 * xm * q * (q - r) - (b - a) * (r - 1.0))
                q = (q - 1.0) * (r - 1.0) * (s - 1.0)
            if p > 0.0:
                q = -q
            p = abs(p)
            if 2.0 * p < min(3.0 * xm * q - abs(tol1 * q), abs(e * q)):
                e = d
                d = p / q
            else:
                d = xm
                e = d
        else:
            d = xm
            e = d
        a, fa = b, fb
        if abs(d) > tol1:
            b += d
        else:
            b += math.copysign(tol1, xm)
        fb = f(b)
        if not math.isfinite(fb):
            raise AccuracyError("f became non-finite inside the bracket", b, abs(c - b))
    raise AccuracyError(f"Brent iteration did not converge in {max_iter} steps", b, abs(c - b))


def scan_brackets(f: Callable[[float], float], grid: list[float]) -> Iterator[Bracket]:
    """Yield the sign-change intervals of ``f`` sampled on an increasing grid."""
    prev_x = grid[0]
    prev_f = f(prev_x)
    for x in grid[1:]:
        fx = f(x)
        if fx == 0.0:
            # find_root returns the exact zero at the upper end immediately
            yield Bracket(prev_x, x)
        elif prev_f != 0.0 and (prev_f > 0.0) != (fx > 0.0):
            yield Bracket(prev_x, x)
        prev_x, prev_f = x, fx
