"""Acceptance checks run by ``abcoupling verify`` and by the test suite.

Thresholds live here and nowhere else; a run configuration cannot loosen them.
Each check returns a ``CheckResult`` whose ``measured`` value is the worst
deviation seen on its grid.  Reports contain no timings so that two runs are
byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from functools import lru_cache
from typing import Callable

import numpy as np

from .cavity_modes import CODATA_2018, CavityGeometry, ModeIndex, solve_mode
from .coupling import (
    c_l,
    f_l,
    gauge_invariance_check,
    microwave_prefactor,
    omega_scale,
    omega_we_closed,
    omega_we_quadrature,
    omega_wp_closed,
    omega_wp_quadrature,
)
from .fields import GaugeShift, ModeDensities, SolenoidConfig, total_charge
from .numerics import DEFAULT_TOLERANCE, bessel_j, bessel_k, integrate_finite

CONST = CODATA_2018
HARD_WALL = CavityGeometry.from_nm(100.0, 100.0)
FINITE_U = CavityGeometry.from_nm(100.0, 100.0, 1e-3)
FINITE_U_MODES = (ModeIndex(1, 0, 1), ModeIndex(1, 2, 1), ModeIndex(2, 1, 3))


@dataclass(frozen=True)
class CheckResult:
    key: str
    description: str
    measured: float
    threshold: float
    passed: bool
    detail: str = ""


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / abs(b)


# ---------------------------------------------------------------------------
# independent Bessel-zero oracle (arbitrary-precision power series + bisection)
# ---------------------------------------------------------------------------

def _series_j_decimal(l: int, x: Decimal) -> Decimal:
    half = x / 2
    term = Decimal(1)
    for i in range(1, l + 1):
        term = term * half / i
    total = term
    q = -half * half
    k = 0
    while True:
        k += 1
        term = term * q / (k * (k + l))
        total += term
        if abs(term) < Decimal(10) ** -45:
            return total


@lru_cache(maxsize=None)
def bisected_bessel_zero(l: int, n: int) -> float:
    """n-th positive zero of J_l by bisection on a 60-digit power series."""
    with localcontext() as ctx:
        ctx.prec = 60
        step = Decimal("0.05")
        x = Decimal(l) / 2 + step
        fx = _series_j_decimal(l, x)
        found = 0
        while True:
            nxt = x + step
            fn = _series_j_decimal(l, nxt)
            if (fx > 0) != (fn > 0):
                found += 1
                if found == n:
                    break
            x, fx = nxt, fn
        lo, hi, flo = x, nxt, fx
        while hi - lo > Decimal(10) ** -20:
            mid = (lo + hi) / 2
            fm = _series_j_decimal(l, mid)
            if (fm > 0) == (flo > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        return float((lo + hi) / 2)


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------

def check_microwave_scale() -> list[CheckResult]:
    energy = microwave_prefactor(100e-9, CONST.Phi0, CONST)
    ueV = energy / CONST.e * 1e6
    ghz = energy / CONST.h * 1e-9
    d_e = abs(ueV / 7.6 - 1.0)
    d_f = abs(ghz / 1.8 - 1.0)
    return [
        CheckResult("1a", "mu_B*Phi0/(pi R^2) at R=100 nm vs 7.6 ueV", d_e, 0.02, d_e <= 0.02, f"{ueV:.4f} ueV"),
        CheckResult("1b", "same energy over h vs 1.8 GHz", d_f, 0.03, d_f <= 0.03, f"{ghz:.4f} GHz"),
    ]


def _normalization_cases():
    for n in (1, 2):
        for l in range(5):
            for m in (1, 3):
                yield HARD_WALL, ModeIndex(n, l, m)
    for mode in FINITE_U_MODES:
        yield FINITE_U, mode


def check_normalization() -> list[CheckResult]:
    worst = 0.0
    worst_case = ""
    count = 0
    for geometry, mode in _normalization_cases():
        sol = solve_mode(geometry, mode, CONST)
        q = total_charge(ModeDensities(geometry, mode, sol, CONST))
        dev = _rel(q, -CONST.e)
        count += 1
        if dev >= worst:
            worst, worst_case = dev, f"{'hard' if geometry.hard_wall else 'U=1meV'} {mode}"
    return [
        CheckResult(
            "2", f"charge quadrature = -e over {count} modes (closed-form N^2)", worst, 1e-9,
            worst <= 1e-9, f"worst {worst_case}",
        )
    ]


def check_wp_oracle() -> list[CheckResult]:
    worst = 0.0
    worst_case = ""
    flux = CONST.Phi0
    for l in range(5):
        mode = ModeIndex(1, l, 1)
        sol = solve_mode(HARD_WALL, mode, CONST)
        for a_over_R in (0.01, 0.1, 0.5):
            sol_cfg = SolenoidConfig(flux, a_over_R * HARD_WALL.R)
            closed = omega_wp_closed(HARD_WALL, mode, sol, sol_cfg, CONST).omega_wp
            quad = omega_wp_quadrature(HARD_WALL, mode, sol, sol_cfg, DEFAULT_TOLERANCE, CONST).omega_wp
            dev = _rel(quad, closed)
            if dev >= worst:
                worst, worst_case = dev, f"l={l} a/R={a_over_R:g}"
    return [CheckResult("3", "WP quadrature vs closed form, l=0..4, a/R in {0.01,0.1,0.5}", worst, 1e-10,
                        worst <= 1e-10, f"worst {worst_case}")]


def _slope(xs: list[float], ys: list[float]) -> float:
    return float(np.polyfit(np.log(xs), np.log(ys), 1)[0])


def check_small_core() -> list[CheckResult]:
    results = []
    # C_0 -> 1 with deviation bounded by (zeta a)^2 / 2
    mode0 = ModeIndex(1, 0, 1)
    sol0 = solve_mode(HARD_WALL, mode0, CONST)
    worst_ratio = 0.0
    for za in (1e-3, 3e-4, 1e-4, 1e-5, 1e-6):
        a = za / sol0.zeta
        dev = abs(c_l(mode0, sol0, a) - 1.0)
        worst_ratio = max(worst_ratio, dev / (0.5 * za * za))
    results.append(CheckResult("4a", "|C_0(a) - 1| / ((zeta a)^2/2) for zeta a <= 1e-3", worst_ratio, 1.0,
                               worst_ratio <= 1.0))
    grid = [10.0 ** e for e in np.linspace(-4.0, -2.0, 9)]
    worst_slope = 0.0
    worst_lead = 0.0
    for l in range(1, 5):
        mode = ModeIndex(1, l, 1)
        sol = solve_mode(HARD_WALL, mode, CONST)
        values = [c_l(mode, sol, za / sol.zeta) for za in grid]
        worst_slope = max(worst_slope, abs(_slope(grid, values) - 2 * l))
        za = grid[0]
        expected = 1.0 / (math.factorial(l) ** 2 * (l + 1))
        lead = values[0] / (0.5 * za) ** (2 * l)
        worst_lead = max(worst_lead, abs(lead / expected - 1.0))
    results.append(CheckResult("4b", "log-log slope of C_l(a) minus 2l, l=1..4, zeta a in [1e-4,1e-2]",
                               worst_slope, 0.05, worst_slope <= 0.05))
    results.append(CheckResult("4c", "C_l/(zeta a/2)^(2l) vs 1/((l!)^2 (l+1)) at zeta a=1e-4",
                               worst_lead, 0.01, worst_lead <= 0.01))
    return results


def check_we_oracle() -> list[CheckResult]:
    worst = 0.0
    worst_case = ""
    flux = CONST.Phi0
    for geometry in (HARD_WALL, FINITE_U):
        for l in range(5):
            mode = ModeIndex(1, l, 1)
            sol = solve_mode(geometry, mode, CONST)
            for a_over_R in (1e-3, 0.1, 0.5):
                cfg = SolenoidConfig(flux, a_over_R * geometry.R)
                closed = omega_we_closed(geometry, mode, sol, cfg, DEFAULT_TOLERANCE, CONST).omega_we
                quad = omega_we_quadrature(geometry, mode, sol, cfg, DEFAULT_TOLERANCE, CONST).omega_we
                dev = _rel(quad, closed)
                if dev >= worst:
                    kind = "hard" if geometry.hard_wall else "U=1meV"
                    worst, worst_case = dev, f"{kind} l={l} a/R={a_over_R:g}"
    return [CheckResult("5", "WE quadrature (-int j.A) vs closed decomposition, 30 cases", worst, 1e-8,
                        worst <= 1e-8, f"worst {worst_case}")]


def check_l_linearity() -> list[CheckResult]:
    worst = 0.0
    worst_zero = 0.0
    flux = CONST.Phi0
    for geometry in (HARD_WALL, FINITE_U):
        for l in range(5):
            mode = ModeIndex(1, l, 1)
            sol = solve_mode(geometry, mode, CONST)
            cfg = SolenoidConfig(flux, 0.1 * geometry.R)
            wp = omega_wp_quadrature(geometry, mode, sol, cfg, DEFAULT_TOLERANCE, CONST)
            we = omega_we_quadrature(geometry, mode, sol, cfg, DEFAULT_TOLERANCE, CONST)
            scale = omega_scale(geometry, mode, sol, flux, CONST)
            diff = we.omega_we - wp.omega_wp
            if l == 0:
                worst_zero = max(worst_zero, abs(diff) / abs(scale))
                continue
            c_quad = wp.omega_wp / scale
            ratio = diff / (scale * (c_quad + f_l(geometry, mode, sol, cfg.core_radius, DEFAULT_TOLERANCE)))
            worst = max(worst, abs(ratio - l))
    return [
        CheckResult("6a", "(WE-WP)/(Omega(R)[C_l+F_l]) - l, quadrature only, l=1..4", worst, 1e-6, worst <= 1e-6),
        CheckResult("6b", "|WE-WP|/|Omega(R)| for l=0, quadrature only", worst_zero, 1e-10, worst_zero <= 1e-10),
    ]


def _gauge_shifts(geometry: CavityGeometry, flux: float) -> list[tuple[str, GaugeShift]]:
    amp = 10.0 * flux / (2.0 * math.pi)
    return [
        ("(rho/R)^2 cos(pi z/2d)", GaugeShift(
            amp, lambda x: x * x, lambda s: math.cos(0.5 * math.pi * s), geometry.R, geometry.d,
            radial_derivative=lambda x: 2.0 * x, axial_derivative=lambda s: -0.5 * math.pi * math.sin(0.5 * math.pi * s),
        )),
        ("rho/R exp(-rho/R) (1+z/d)", GaugeShift(
            amp, lambda x: x * math.exp(-x), lambda s: 1.0 + s, geometry.R, geometry.d,
        )),
    ]


def check_gauge_invariance() -> list[CheckResult]:
    worst = 0.0
    worst_case = ""
    flux = CONST.Phi0
    for geometry in (HARD_WALL, FINITE_U):
        for l in (0, 2):
            mode = ModeIndex(1, l, 1)
            sol = solve_mode(geometry, mode, CONST)
            cfg = SolenoidConfig(flux, 0.1 * geometry.R)
            for label, shift in _gauge_shifts(geometry, flux):
                dev = gauge_invariance_check(geometry, mode, sol, cfg, shift, DEFAULT_TOLERANCE, CONST)
                # the check normalizes by max(|Omega_WE|, |Omega(R)|); re-express over |Omega(R)|
                we = omega_we_closed(geometry, mode, sol, cfg, DEFAULT_TOLERANCE, CONST)
                dev *= max(abs(we.omega_we), abs(we.omega_scale)) / abs(we.omega_scale)
                if dev >= worst:
                    worst, worst_case = dev, f"l={l} chi~{label}"
    return [CheckResult("7", "gauge shift of amplitude 10 Phi/(2 pi): |dOmega_WE|/|Omega(R)|", worst, 1e-9,
                        worst <= 1e-9, f"worst {worst_case}")]


def check_special_functions() -> list[CheckResult]:
    xs = [0.25 * i for i in range(1, 401)]
    worst_j = 0.0
    worst_k = 0.0
    for l in range(1, 11):
        for x in xs:
            jm, j, jp = bessel_j(l - 1, x), bessel_j(l, x), bessel_j(l + 1, x)
            rhs = 2.0 * l / x * j
            worst_j = max(worst_j, abs(jm + jp - rhs) / max(abs(jm), abs(jp), abs(rhs)))
        for x in xs:
            km, k, kp = bessel_k(l - 1, x), bessel_k(l, x), bessel_k(l + 1, x)
            rhs = 2.0 * l / x * k
            worst_k = max(worst_k, abs(kp - km - rhs) / max(kp, km, rhs))
    worst_id = 0.0
    for l in range(7):
        for x in [0.5 * i for i in range(1, 61)]:
            lhs = 2.0 / (x * x) * integrate_finite(lambda t: bessel_j(l, t) ** 2 * t, 0.0, x, DEFAULT_TOLERANCE)
            jl = bessel_j(l, x)
            rhs = jl * jl - bessel_j(l - 1, x) * bessel_j(l + 1, x)
            worst_id = max(worst_id, _rel(lhs, rhs))
    worst_zero = 0.0
    for l in range(5):
        for n in (1, 2):
            sol = solve_mode(HARD_WALL, ModeIndex(n, l, 1), CONST)
            worst_zero = max(worst_zero, abs(sol.zeta_R - bisected_bessel_zero(l, n)))
    return [
        CheckResult("8a", "J_{l-1}+J_{l+1} = (2l/x) J_l, l=1..10, x in (0,100]", worst_j, 1e-10, worst_j <= 1e-10),
        CheckResult("8b", "K_{l+1}-K_{l-1} = (2l/x) K_l, l=1..10, x in (0,100]", worst_k, 1e-10, worst_k <= 1e-10),
        CheckResult("8c", "(2/x^2) int_0^x J_l^2 t dt = J_l^2 - J_{l-1}J_{l+1}, l=0..6, x in (0,30]",
                    worst_id, 1e-10, worst_id <= 1e-10),
        CheckResult("8d", "hard-wall zeta R vs bisected series zeros, l=0..4, n=1,2 (absolute)",
                    worst_zero, 1e-12, worst_zero <= 1e-12),
    ]


CRITERIA: dict[str, Callable[[], list[CheckResult]]] = {
    "microwave_scale": check_microwave_scale,
    "normalization": check_normalization,
    "wp_oracle": check_wp_oracle,
    "small_core": check_small_core,
    "we_oracle": check_we_oracle,
    "l_linearity": check_l_linearity,
    "gauge_invariance": check_gauge_invariance,
    "special_functions": check_special_functions,
}


def run_all() -> list[CheckResult]:
    results: list[CheckResult] = []
    for check in CRITERIA.values():
        results.extend(check())
    return results


def format_report(results: list[CheckResult]) -> str:
    lines = [f"{'id':<4} {'status':<6} {'measured':>10} {'limit':>9}  check"]
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        detail = f"  [{r.detail}]" if r.detail else ""
        lines.append(f"{r.key:<4} {status:<6} {r.measured:>10.3e} {r.threshold:>9.1e}  {r.description}{detail}")
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
