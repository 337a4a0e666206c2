"""Wave-particle and wave-entity coupling energies.

Every energy has two independent routes:

* closed forms built from C_l(a) = J_l^2(zeta a) - J_{l-1}J_{l+1}(zeta a) and
  the scale Omega(R) = mu_B * Phi * d * N^2;
* direct volume quadrature of -int M.B and -int j.A over (rho, phi, z), using
  only the density evaluators of ``fields`` and no Bessel-integral identities.

F_l has no closed form and is always a quadrature.  Quadratures run at unit
flux and are multiplied by Phi at the end, which keeps every result exactly
linear in the flux (and exactly zero at zero flux).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .cavity_modes import CODATA_2018, CavityGeometry, ModeIndex, PhysicalConstants, RadialSolution
from .errors import DivergenceError, ValidationError
from .fields import GaugeShift, ModeDensities, SolenoidConfig, gauge_shifted_potential, volume_integral
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    bessel_j,
    bessel_k_scaled,
    integrate_finite,
    integrate_semi_infinite,
)


class Method(str, Enum):
    CLOSED_FORM = "closed_form"
    QUADRATURE = "quadrature"
    SMALL_CORE_LIMIT = "small_core_limit"


@dataclass(frozen=True)
class CouplingBreakdown:
    """Energies in joules; ``f_l`` is NaN where it is undefined (l = 0 at a = 0)."""

    geometry: CavityGeometry
    mode: ModeIndex
    solenoid: SolenoidConfig
    omega_scale: float
    c_l: float
    f_l: float
    omega_wp: float
    omega_we: float
    delta_we: float
    method: Method
    constants: PhysicalConstants = CODATA_2018

    @property
    def flux_over_Phi0(self) -> float:
        return self.solenoid.flux / self.constants.Phi0

    def to_ueV(self, energy: float) -> float:
        return energy / self.constants.e * 1e6

    def to_GHz(self, energy: float) -> float:
        return energy / self.constants.h * 1e-9


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def omega_scale(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    flux: float,
    constants: PhysicalConstants = CODATA_2018,
) -> float:
    """Omega(R) = mu_B * Phi * d * N^2, in joules."""
    return constants.mu_B * flux * geometry.d * solution.n_sq


def microwave_prefactor(R: float, flux: float, constants: PhysicalConstants = CODATA_2018) -> float:
    """mu_B * Phi / (pi R^2): the mode-independent energy unit of Omega(R)."""
    return constants.mu_B * flux / (math.pi * R * R)


def c_l(mode: ModeIndex, solution: RadialSolution, core_radius: float) -> float:
    """Core overlap factor J_l^2(zeta a) - J_{l-1}(zeta a) J_{l+1}(zeta a)."""
    if core_radius < 0.0:
        raise ValidationError(f"core radius must be >= 0, got {core_radius!r}")
    l = mode.l
    if core_radius == 0.0:
        return 1.0 if l == 0 else 0.0
    x = solution.zeta_R * (core_radius / solution.R)
    jl = bessel_j(l, x)
    return jl * jl - bessel_j(l - 1, x) * bessel_j(l + 1, x)


def _check_core(geometry: CavityGeometry, solenoid: SolenoidConfig) -> None:
    if solenoid.core_radius >= geometry.R:
        raise ValidationError(
            f"core radius {solenoid.core_radius!r} m must lie inside the cavity (R = {geometry.R!r} m)"
        )


def omega_wp_closed(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    constants: PhysicalConstants = CODATA_2018,
) -> CouplingBreakdown:
    _check_core(geometry, solenoid)
    scale = omega_scale(geometry, mode, solution, solenoid.flux, constants)
    cl = c_l(mode, solution, solenoid.core_radius)
    method = Method.SMALL_CORE_LIMIT if solenoid.core_radius == 0.0 else Method.CLOSED_FORM
    wp = scale * cl
    return CouplingBreakdown(
        geometry, mode, solenoid, scale, cl, math.nan, wp, math.nan, math.nan, method, constants
    )


def f_l(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    core_radius: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> float:
    """2 [int_a^R J_l^2(zeta rho)/rho drho + kappa^2 int_R^inf K_l^2(xi rho)/rho drho]."""
    l = mode.l
    if core_radius < 0.0 or core_radius >= geometry.R:
        raise ValidationError(f"core radius must lie in [0, R), got {core_radius!r}")
    if l == 0 and core_radius == 0.0:
        raise DivergenceError("F_0 diverges logarithmically as the core radius goes to zero")
    zR = solution.zeta_R

    def interior(x: float) -> float:
        j = bessel_j(l, zR * x)
        return j * j / x

    total = integrate_finite(interior, core_radius / geometry.R, 1.0, tol)
    if solution.kappa != 0.0:
        xR = solution.xi_R
        kappa = solution.kappa

        def exterior(x: float) -> float:
            arg = xR * x
            k = kappa * bessel_k_scaled(l, arg) * math.exp(-arg)
            return k * k / x

        total += integrate_semi_infinite(exterior, 1.0, xR, tol)
    return 2.0 * total


def omega_we_closed(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    tol: Tolerance = DEFAULT_TOLERANCE,
    constants: PhysicalConstants = CODATA_2018,
) -> CouplingBreakdown:
    """Omega_WE = Omega_WP + l * Omega(R) * (C_l(a) + F_l(R)).

    At a = 0 this is the small-core limit Omega(R) delta_l0 + l Omega(R) F_l(R).
    For l = 0 the shift vanishes identically and F_0 is reported only for a > 0.
    """
    wp = omega_wp_closed(geometry, mode, solution, solenoid, constants)
    l = mode.l
    if l == 0 and solenoid.core_radius == 0.0:
        fl = math.nan
    else:
        fl = f_l(geometry, mode, solution, solenoid.core_radius, tol)
    delta = 0.0 if l == 0 else l * wp.omega_scale * (wp.c_l + fl)
    return CouplingBreakdown(
        geometry,
        mode,
        solenoid,
        wp.omega_scale,
        wp.c_l,
        fl,
        wp.omega_wp,
        wp.omega_wp + delta,
        delta,
        wp.method,
        constants,
    )


# ---------------------------------------------------------------------------
# quadrature oracles
# ---------------------------------------------------------------------------

def _radial_breaks(geometry: CavityGeometry, solenoid: SolenoidConfig) -> list[float]:
    a_over_R = solenoid.core_radius / geometry.R
    return [0.0, a_over_R, 1.0] if a_over_R > 0.0 else [0.0, 1.0]


def omega_wp_quadrature(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    tol: Tolerance = DEFAULT_TOLERANCE,
    constants: PhysicalConstants = CODATA_2018,
) -> CouplingBreakdown:
    """-int M_z B_z d^3r over the core cylinder, fully numerical."""
    _check_core(geometry, solenoid)
    if solenoid.core_radius <= 0.0:
        raise ValidationError("the quadrature route needs a finite core radius (B_z is a delta at a = 0)")
    dens = ModeDensities(geometry, mode, solution, constants)
    unit = solenoid.with_flux(1.0)
    scale_unit = omega_scale(geometry, mode, solution, 1.0, constants)

    def integrand(rho: float, phi: float, z: float) -> float:
        return -dens.magnetization_z(rho, z) * unit.magnetic_field_z(rho)

    # magnetization ~ mu_B N^2, field ~ 1/(pi R^2) at unit flux
    scale = constants.mu_B * solution.n_sq / (math.pi * geometry.R ** 2)
    per_flux = volume_integral(
        integrand, geometry, [0.0, solenoid.core_radius / geometry.R], None, scale, tol
    )
    scale_energy = solenoid.flux * scale_unit
    wp = solenoid.flux * per_flux
    cl = per_flux / scale_unit
    return CouplingBreakdown(
        geometry, mode, solenoid, scale_energy, cl, math.nan, wp, math.nan, math.nan,
        Method.QUADRATURE, constants,
    )


def _we_unit_quadrature(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    potential_phi: Callable[[float, float, float], float],
    tol: Tolerance,
    constants: PhysicalConstants,
) -> float:
    dens = ModeDensities(geometry, mode, solution, constants)

    def integrand(rho: float, phi: float, z: float) -> float:
        return -dens.current_density_phi(rho, z) * potential_phi(rho, phi, z)

    # current ~ mu_B N^2 / R, potential ~ 1/R at unit flux
    scale = constants.mu_B * solution.n_sq / geometry.R ** 2
    decay = None if solution.kappa == 0.0 else solution.xi_R
    return volume_integral(integrand, geometry, _radial_breaks(geometry, solenoid), decay, scale, tol)


def omega_we_quadrature(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    tol: Tolerance = DEFAULT_TOLERANCE,
    constants: PhysicalConstants = CODATA_2018,
) -> CouplingBreakdown:
    """-int j_phi A_phi d^3r over core, annulus and exterior tail, fully numerical.

    Valid at a = 0 as well: j_phi ~ rho^(2l+1) tames the 1/rho potential.
    Only ``omega_we`` and ``omega_scale`` are filled in.
    """
    _check_core(geometry, solenoid)
    unit = solenoid.with_flux(1.0)
    per_flux = _we_unit_quadrature(
        geometry, mode, solution, solenoid,
        lambda rho, phi, z: unit.vector_potential_phi(rho), tol, constants,
    )
    scale_energy = omega_scale(geometry, mode, solution, solenoid.flux, constants)
    return CouplingBreakdown(
        geometry, mode, solenoid, scale_energy, math.nan, math.nan, math.nan,
        solenoid.flux * per_flux, math.nan, Method.QUADRATURE, constants,
    )


def quadrature_breakdown(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    tol: Tolerance = DEFAULT_TOLERANCE,
    constants: PhysicalConstants = CODATA_2018,
) -> CouplingBreakdown:
    """All fields from quadrature alone: C_l from -int M.B, F_l, Omega_WE from -int j.A."""
    wp = omega_wp_quadrature(geometry, mode, solution, solenoid, tol, constants)
    we = omega_we_quadrature(geometry, mode, solution, solenoid, tol, constants)
    fl = f_l(geometry, mode, solution, solenoid.core_radius, tol)
    return CouplingBreakdown(
        geometry, mode, solenoid, wp.omega_scale, wp.c_l, fl, wp.omega_wp, we.omega_we,
        we.omega_we - wp.omega_wp, Method.QUADRATURE, constants,
    )


def gauge_invariance_check(
    geometry: CavityGeometry,
    mode: ModeIndex,
    solution: RadialSolution,
    solenoid: SolenoidConfig,
    shift: GaugeShift,
    tol: Tolerance = DEFAULT_TOLERANCE,
    constants: PhysicalConstants = CODATA_2018,
) -> float:
    """|Omega_WE[A + grad chi] - Omega_WE[A]| / max(|Omega_WE[A]|, |Omega(R)|).

    Both energies go through the same iterated quadrature, so a vanishing
    amplitude gives exactly zero; otherwise the residual measures how well the
    angular integral of j_phi * d(chi)/(rho d phi) cancels numerically.
    """
    _check_core(geometry, solenoid)
    if solenoid.flux == 0.0:
        return 0.0
    # unit-flux copies: the shift is rescaled with the flux to stay proportional
    unit = solenoid.with_flux(1.0)
    unit_shift = GaugeShift(
        shift.amplitude / solenoid.flux,
        shift.radial_profile,
        shift.axial_profile,
        shift.radius,
        shift.half_height,
        shift.angular,
        shift.angular_derivative,
        shift.radial_derivative,
        shift.axial_derivative,
    )
    plain = _we_unit_quadrature(
        geometry, mode, solution, solenoid,
        lambda rho, phi, z: unit.vector_potential_phi(rho), tol, constants,
    )
    shifted = _we_unit_quadrature(
        geometry, mode, solution, solenoid,
        lambda rho, phi, z: gauge_shifted_potential(unit, unit_shift, rho, phi, z)[1], tol, constants,
    )
    scale_unit = omega_scale(geometry, mode, solution, 1.0, constants)
    return abs(shifted - plain) / max(abs(plain), abs(scale_unit))
