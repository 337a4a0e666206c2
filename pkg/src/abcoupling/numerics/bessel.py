"""Integer-order Bessel functions J_l and K_l for real non-negative arguments.

J_l uses three regimes:

* ascending power series while (x/2)^2 <= (l+1)/2, where the alternating
  terms shrink from the first one and no digits are lost to cancellation;
* Hankel's asymptotic expansion once its terms fall below machine epsilon
  before they start to grow (large x relative to l^2);
* Miller's downward recurrence for everything in between, normalised with
  J_0 + 2*sum(J_2k) = 1, or for x >= 25 by a least-squares match of the
  bottom two orders against Hankel's J_0 and J_1.

K_l is built from K_0 and K_1 (series for x <= 2, Steed's continued fraction
for x > 2) followed by upward recurrence, which is stable for K.  All K
evaluation is done on the exponentially scaled function e^x K_l(x) so that
exterior tails deep into the barrier do not underflow.
"""

from __future__ import annotations

import math

from ..errors import DomainError

MAX_ORDER = 64
MAX_ARGUMENT = 1.0e8

_EULER_GAMMA = 0.57721566490153286060651209008240243
_EPS = 2.220446049250313e-16
_MILLER_ACC = 160.0
_RESCALE_BIG = 1.0e250
_RESCALE_SMALL = 1.0e-250


def _check_order(l: int) -> int:
    if isinstance(l, bool) or not isinstance(l, int):
        if isinstance(l, float) and l.is_integer():
            l = int(l)
        else:
            raise DomainError(f"Bessel order must be an integer, got {l!r}")
    if abs(l) > MAX_ORDER:
        raise DomainError(f"|order| {l} exceeds supported maximum {MAX_ORDER}")
    return l


# ---------------------------------------------------------------------------
# J_l
# ---------------------------------------------------------------------------

def _j_series(n: int, x: float) -> float:
    half = 0.5 * x
    lead = 1.0
    for i in range(1, n + 1):
        lead *= half / i
    if lead == 0.0:
        return 0.0
    q = -half * half
    term = 1.0
    total = 1.0
    k = 0
    while True:
        k += 1
        term *= q / (k * (k + n))
        total += term
        if abs(term) <= 0.5 * _EPS * abs(total):
            break
    return lead * total


def _hankel_pq(n: int, x: float) -> tuple[float, float] | None:
    """P and Q of Hankel's expansion, or None if the series stalls above eps."""
    mu = 4.0 * n * n
    p, q = 1.0, 0.0
    term = 1.0
    prev = math.inf
    eight_x = 8.0 * x
    for k in range(1, 200):
        term *= (mu - (2 * k - 1) ** 2) / (k * eight_x)
        mag = abs(term)
        if mag > prev and k > 2:
            return None
        prev = mag
        sign = -1.0 if (k // 2) % 2 else 1.0
        if k % 2:
            q += sign * term
        else:
            p += sign * term
        if mag <= 0.25 * _EPS * abs(p):
            return p, q
    return None


def _j_hankel(n: int, x: float) -> float | None:
    pq = _hankel_pq(n, x)
    if pq is None:
        return None
    p, q = pq
    c, s = math.cos(x), math.sin(x)
    # phase x - pi/4 - n*pi/2, applied as an exact quarter-turn rotation
    cw = (c + s) * math.sqrt(0.5)
    sw = (s - c) * math.sqrt(0.5)
    r = n % 4
    if r == 1:
        cw, sw = sw, -cw
    elif r == 2:
        cw, sw = -cw, -sw
    elif r == 3:
        cw, sw = -sw, cw
    return math.sqrt(2.0 / (math.pi * x)) * (p * cw - q * sw)


def _j_miller(n: int, x: float) -> float:
    top = max(n, int(x)) + 1
    start = 2 * ((top + int(math.sqrt(_MILLER_ACC * top)) + 20) // 2)
    bjp = 0.0
    bj = 1.0
    even_sum = 0.0
    ans = 0.0
    for k in range(start, 0, -1):
        # divide per step: a rounded 2/x would act like a systematically shifted x
        bjm = (2 * k) / x * bj - bjp
        bjp, bj = bj, bjm
        if abs(bj) > _RESCALE_BIG:
            bj *= _RESCALE_SMALL
            bjp *= _RESCALE_SMALL
            ans *= _RESCALE_SMALL
            even_sum *= _RESCALE_SMALL
        order = k - 1
        if order == n:
            ans = bj
        if order >= 2 and order % 2 == 0:
            even_sum += bj
    if x >= 25.0:
        # J_0 and J_1 are accurate from Hankel here; a least-squares match on
        # both avoids the roundoff that builds up in the long normalisation sum
        j0 = _j_hankel(0, x)
        j1 = _j_hankel(1, x)
        if j0 is not None and j1 is not None:
            return ans * (j0 * bj + j1 * bjp) / (bj * bj + bjp * bjp)
    norm = bj + 2.0 * even_sum
    return ans / norm


def _hankel_applicable(n: int, x: float) -> bool:
    return x >= 25.0 and x >= 0.5 * n * n


def bessel_j(l: int, x: float) -> float:
    """Bessel function of the first kind J_l(x) for integer l and x >= 0.

    Negative orders follow J_{-n} = (-1)^n J_n.
    """
    l = _check_order(l)
    x = float(x)
    if not (x >= 0.0) or x > MAX_ARGUMENT:
        raise DomainError(f"bessel_j argument must lie in [0, {MAX_ARGUMENT:g}], got {x!r}")
    if l < 0:
        value = bessel_j(-l, x)
        return -value if (-l) % 2 else value
    if x == 0.0:
        return 1.0 if l == 0 else 0.0
    if 0.25 * x * x <= 0.5 * (l + 1):
        return _j_series(l, x)
    if _hankel_applicable(l, x):
        value = _j_hankel(l, x)
        if value is not None:
            return value
    return _j_miller(l, x)


# ---------------------------------------------------------------------------
# K_l
# ---------------------------------------------------------------------------

def _k01_series(x: float) -> tuple[float, float]:
    y = 0.25 * x * x
    log_half = math.log(0.5 * x)
    # I_0, I_1 and the digamma-weighted companion sums
    t0 = 1.0          # y^k / (k!)^2
    t1 = 1.0          # y^k / (k! (k+1)!)
    i0 = 1.0
    i1s = 1.0
    h = 0.0           # harmonic number H_k
    s0 = 0.0
    s1 = -2.0 * _EULER_GAMMA + 1.0   # psi(1) + psi(2)
    k = 0
    while True:
        k += 1
        t0 *= y / (k * k)
        t1 *= y / (k * (k + 1))
        h += 1.0 / k
        i0 += t0
        i1s += t1
        s0 += h * t0
        s1 += (2.0 * h + 1.0 / (k + 1) - 2.0 * _EULER_GAMMA) * t1
        if t0 <= 0.25 * _EPS * i0 and t1 <= 0.25 * _EPS * i1s and h * t0 <= 0.25 * _EPS * abs(s0 + 1.0):
            break
    i1 = 0.5 * x * i1s
    k0 = -(log_half + _EULER_GAMMA) * i0 + s0
    k1 = 1.0 / x + log_half * i1 - 0.25 * x * s1
    return k0, k1


def _k01_scaled_cf(x: float) -> tuple[float, float]:
    """Steed's continued fraction for e^x K_0(x), e^x K_1(x); valid for x >= 2."""
    b = 2.0 * (1.0 + x)
    d = 1.0 / b
    h = delh = d
    q1, q2 = 0.0, 1.0
    a1 = 0.25
    q = c = a1
    a = -a1
    s = 1.0 + q * delh
    for i in range(1, 10000):
        a -= 2 * i
        c = -a * c / (i + 1.0)
        qnew = (q1 - b * q2) / a
        q1, q2 = q2, qnew
        q += c * qnew
        b += 2.0
        d = 1.0 / (b + a * d)
        delh = (b * d - 1.0) * delh
        h += delh
        dels = q * delh
        s += dels
        if abs(dels / s) < 0.5 * _EPS:
            break
    else:  # pragma: no cover - converges in a handful of steps for x >= 2
        raise DomainError(f"K continued fraction failed to converge at x={x!r}")
    h *= a1
    k0 = math.sqrt(math.pi / (2.0 * x)) / s
    k1 = k0 * (x + 0.5 - h) / x
    return k0, k1


def bessel_k_scaled(l: int, x: float) -> float:
    """Exponentially scaled modified Bessel function e^x K_l(x), x > 0."""
    l = abs(_check_order(l))
    x = float(x)
    if not (x > 0.0) or math.isinf(x):
        raise DomainError(f"K_l(x) requires finite x > 0, got {x!r}")
    if x <= 2.0:
        k0, k1 = _k01_series(x)
        scale = math.exp(x)
        k0 *= scale
        k1 *= scale
    else:
        k0, k1 = _k01_scaled_cf(x)
    if l == 0:
        return k0
    km, k = k0, k1
    for j in range(1, l):
        km, k = k, km + (2.0 * j / x) * k
    if math.isinf(k):
        raise DomainError(f"K_{l}({x!r}) overflows double precision")
    return k


def bessel_k(l: int, x: float) -> float:
    """Modified Bessel function of the second kind K_l(x) for x > 0.

    K_{-n} = K_n.  Raises DomainError when the value over- or underflows.
    """
    value = bessel_k_scaled(l, x) * math.exp(-float(x))
    if value == 0.0 or math.isinf(value):
        raise DomainError(f"K_{l}({x!r}) is outside double-precision range")
    return value


def bessel_k_ratio(l: int, x: float, x_ref: float) -> float:
    """K_l(x) / K_l(x_ref), computed without under- or overflow."""
    return bessel_k_scaled(l, x) / bessel_k_scaled(l, x_ref) * math.exp(x_ref - x)
