"""Adaptive Gauss-Kronrod (7/15) quadrature and an exponential-tail wrapper.

The error estimate of each panel is |K15 - G7|.  Panels are refined in order
of largest error (global adaptivity, as in QUADPACK's QAG) until the summed
estimate meets ``max(tol.abs, tol.rel * |result|)``.  A panel whose error is
already at the round-off level of its own absolute integral is frozen, since
bisecting it further cannot help.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

from ..errors import AccuracyError, DomainError

_EPS = 2.220446049250313e-16
_MAX_PANELS = 20000

# Kronrod nodes on [0, 1] (mirror for negatives); odd indices are Gauss nodes
_XGK = (
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
)
_WGK = (
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
)
_WG = (
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
)


@dataclass(frozen=True)
class Tolerance:
    rel: float = 1e-12
    abs: float = 1e-15
    max_depth: int = 60

    def __post_init__(self) -> None:
        if not self.rel > 0:
            raise DomainError(f"Tolerance.rel must be > 0, got {self.rel!r}")
        if not self.abs >= 0:
            raise DomainError(f"Tolerance.abs must be >= 0, got {self.abs!r}")
        if int(self.max_depth) != self.max_depth or self.max_depth < 1:
            raise DomainError(f"Tolerance.max_depth must be an integer >= 1, got {self.max_depth!r}")

    def target(self, value: float) -> float:
        return max(self.abs, self.rel * abs(value))


DEFAULT_TOLERANCE = Tolerance()


def gauss_kronrod_15(f: Callable[[float], float], lo: float, hi: float) -> tuple[float, float, float]:
    """One G7/K15 panel: (kronrod estimate, |K15 - G7|, integral of |f|)."""
    center = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    fc = f(center)
    kronrod = fc * _WGK[7]
    gauss = fc * _WG[3]
    absolute = abs(fc) * _WGK[7]
    for j in range(7):
        dx = half * _XGK[j]
        f1 = f(center - dx)
        f2 = f(center + dx)
        kronrod += _WGK[j] * (f1 + f2)
        absolute += _WGK[j] * (abs(f1) + abs(f2))
        if j % 2:
            gauss += _WG[j // 2] * (f1 + f2)
    kronrod *= half
    gauss *= half
    absolute *= abs(half)
    return kronrod, abs(kronrod - gauss), absolute


def _adaptive(f: Callable[[float], float], lo: float, hi: float, tol: Tolerance) -> tuple[float, float]:
    # heap entries: (-err, depth, lo, hi, value, err)
    heap: list[tuple[float, int, float, float, float, float]] = []
    frozen_value = 0.0
    frozen_err = 0.0

    def place(a: float, b: float, depth: int) -> None:
        nonlocal frozen_value, frozen_err
        v, e, absval = gauss_kronrod_15(f, a, b)
        if not math.isfinite(v):
            raise AccuracyError(f"integrand is not finite on [{a!r}, {b!r}]", math.nan, math.inf)
        if e > 50.0 * _EPS * absval:
            heapq.heappush(heap, (-e, depth, a, b, v, e))
        else:
            frozen_value += v
            frozen_err += e

    place(lo, hi, 0)
    total = frozen_value + sum(item[4] for item in heap)
    total_err = frozen_err + sum(item[5] for item in heap)
    while heap and total_err > tol.target(total):
        _, depth, a, b, v, e = heapq.heappop(heap)
        if depth >= tol.max_depth or len(heap) > _MAX_PANELS:
            raise AccuracyError(
                f"adaptive quadrature on [{lo!r}, {hi!r}] hit refinement cap", total, total_err
            )
        mid = 0.5 * (a + b)
        place(a, mid, depth + 1)
        place(mid, b, depth + 1)
        # re-summed each pass so running updates cannot drift
        total = frozen_value + math.fsum(item[4] for item in heap)
        total_err = frozen_err + sum(item[5] for item in heap)
    return total, total_err


def integrate_finite(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    with_error: bool = False,
):
    """Integrate ``f`` over [lo, hi] to ``max(tol.abs, tol.rel*|I|)``.

    Returns the estimate, or ``(estimate, error)`` when ``with_error`` is set.
    Raises AccuracyError (carrying the best estimate) if a panel needs more than
    ``tol.max_depth`` bisections.
    """
    lo = float(lo)
    hi = float(hi)
    if not (math.isfinite(lo) and math.isfinite(hi)):
        raise DomainError("integrate_finite needs finite limits; use integrate_semi_infinite")
    if hi < lo:
        raise DomainError(f"integrate_finite requires lo <= hi, got [{lo!r}, {hi!r}]")
    if hi == lo:
        return (0.0, 0.0) if with_error else 0.0
    value, err = _adaptive(f, lo, hi, tol)
    return (value, err) if with_error else value


def integrate_semi_infinite(
    f: Callable[[float], float],
    lo: float,
    decay_rate: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
    *,
    with_error: bool = False,
):
    """Integrate ``f`` over [lo, inf) for integrands decaying like exp(-2*decay_rate*t).

    The range is walked in panels of width 1/decay_rate.  After each panel the
    remaining tail is bounded by ``2*|f(t)|/(2*decay_rate)``, i.e. the exact
    tail of a pure exponential through the current endpoint with a safety
    factor of two for slowly varying prefactors (powers of t, 1/sqrt(t) from
    the K_l asymptotics).  Walking stops once that bound is below
    ``tol.abs + tol.rel*|partial|``; the bound is added to the error estimate.
    """
    lo = float(lo)
    decay_rate = float(decay_rate)
    if not (decay_rate > 0.0) or not math.isfinite(decay_rate):
        raise DomainError(f"decay_rate must be positive and finite, got {decay_rate!r}")
    if not math.isfinite(lo):
        raise DomainError(f"lower limit must be finite, got {lo!r}")
    width = 1.0 / decay_rate
    total = 0.0
    total_err = 0.0
    a = lo
    for _ in range(10000):
        b = a + width
        # later panels only need to be accurate relative to the running total
        floor = max(tol.abs, 0.25 * tol.rel * abs(total))
        value, err = _adaptive(f, a, b, Tolerance(tol.rel, floor, tol.max_depth))
        total += value
        total_err += err
        tail = abs(f(b)) / decay_rate
        if tail < tol.abs + tol.rel * abs(total):
            total_err += tail
            return (total, total_err) if with_error else total
        a = b
    raise AccuracyError("exponential tail did not fall below tolerance", total, total_err)
