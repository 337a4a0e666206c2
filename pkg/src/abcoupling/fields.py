"""Mode densities and the solenoid potential.

``ModeDensities`` binds one solved mode and evaluates charge, azimuthal current
and magnetization at arbitrary (rho, z).  The radial factor is cached per rho
because nested quadrature revisits the same rho for many z and phi nodes.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, TextIO

import numpy as np

from .cavity_modes import CODATA_2018, CavityGeometry, ModeIndex, PhysicalConstants, RadialSolution
from .errors import DomainError, ValidationError
from .numerics import (
    DEFAULT_TOLERANCE,
    Tolerance,
    bessel_j,
    bessel_k_scaled,
    integrate_finite,
    integrate_semi_infinite,
)

TWO_PI = 2.0 * math.pi
CSV_COLUMNS = ("rho_over_R", "z_over_d", "charge_density", "current_density_phi", "magnetization_z")


def fmt(value: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(value, ".17g")


@dataclass(frozen=True)
class SolenoidConfig:
    """Flux ``flux`` (Wb) spread uniformly over a core of radius ``core_radius`` (m)."""

    flux: float
    core_radius: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.flux):
            raise ValidationError(f"flux must be finite, got {self.flux!r}")
        if not (self.core_radius >= 0.0 and math.isfinite(self.core_radius)):
            raise ValidationError(f"core radius must be >= 0, got {self.core_radius!r}")

    def check_inside(self, geometry: CavityGeometry) -> None:
        if self.core_radius >= geometry.R:
            raise ValidationError(
                f"core radius {self.core_radius!r} m must be smaller than the cavity radius {geometry.R!r} m"
            )

    def with_flux(self, flux: float) -> "SolenoidConfig":
        return SolenoidConfig(flux, self.core_radius)

    def vector_potential_phi(self, rho: float) -> float:
        a = self.core_radius
        if rho < 0.0:
            raise DomainError(f"rho must be >= 0, got {rho!r}")
        if a == 0.0:
            if rho == 0.0:
                raise DomainError("A_phi is singular on the axis of a zero-radius solenoid")
            return self.flux / (2.0 * math.pi * rho)
        if rho <= a:
            return self.flux * rho / (2.0 * math.pi * a * a)
        return self.flux / (2.0 * math.pi * rho)

    def magnetic_field_z(self, rho: float) -> float:
        a = self.core_radius
        if a == 0.0:
            raise DomainError(
                "B_z of a zero-radius solenoid is a delta function; use the small-core limit formulas"
            )
        if rho < 0.0:
            raise DomainError(f"rho must be >= 0, got {rho!r}")
        return self.flux / (math.pi * a * a) if rho <= a else 0.0


@dataclass(frozen=True)
class GaugeShift:
    """chi = amplitude * radial_profile(rho/R) * angular(phi) * axial_profile(z/d).

    The default angular factor is sin(phi).  Derivatives of the profiles are
    taken by central differences unless supplied.
    """

    amplitude: float
    radial_profile: Callable[[float], float]
    axial_profile: Callable[[float], float]
    radius: float
    half_height: float
    angular: Callable[[float], float] = math.sin
    angular_derivative: Callable[[float], float] = math.cos
    radial_derivative: Callable[[float], float] | None = None
    axial_derivative: Callable[[float], float] | None = None

    def __post_init__(self) -> None:
        if not (self.radius > 0 and self.half_height > 0):
            raise ValidationError("gauge shift needs positive radius and half-height scales")
        varies = any(self.angular_derivative(p) != 0.0 for p in (0.0, 1.0, 2.0))
        if varies and self.radial_profile(0.0) != 0.0:
            raise ValidationError(
                "an angle-dependent gauge function must vanish on the axis to be single-valued"
            )

    def _d_radial(self, x: float) -> float:
        if self.radial_derivative is not None:
            return self.radial_derivative(x)
        h = 1e-6 * max(1.0, abs(x))
        return (self.radial_profile(x + h) - self.radial_profile(x - h)) / (2.0 * h)

    def _d_axial(self, s: float) -> float:
        if self.axial_derivative is not None:
            return self.axial_derivative(s)
        h = 1e-6 * max(1.0, abs(s))
        return (self.axial_profile(s + h) - self.axial_profile(s - h)) / (2.0 * h)

    def gradient(self, rho: float, phi: float, z: float) -> tuple[float, float, float]:
        """Cylindrical components of grad chi."""
        if self.amplitude == 0.0:
            return 0.0, 0.0, 0.0
        R, d = self.radius, self.half_height
        x, s = rho / R, z / d
        g = self.radial_profile(x)
        h = self.axial_profile(s)
        ang = self.angular(phi)
        d_rho = self.amplitude * self._d_radial(x) / R * ang * h
        if rho == 0.0:
            # g(0) = 0 for angle-dependent chi, so g(x)/rho -> g'(0)/R
            g_over_rho = self._d_radial(0.0) / R
        else:
            g_over_rho = g / rho
        d_phi = self.amplitude * g_over_rho * self.angular_derivative(phi) * h
        d_z = self.amplitude * g * ang * self._d_axial(s) / d
        return d_rho, d_phi, d_z


def gauge_shifted_potential(
    config: SolenoidConfig, shift: GaugeShift, rho: float, phi: float, z: float
) -> tuple[float, float, float]:
    """(A_rho, A_phi, A_z) of the solenoid potential plus grad chi."""
    g_rho, g_phi, g_z = shift.gradient(rho, phi, z)
    return g_rho, config.vector_potential_phi(rho) + g_phi, g_z


@dataclass(frozen=True)
class DensitySample:
    rho: float
    z: float
    charge_density: float
    current_density_phi: float
    magnetization_z: float


class ModeDensities:
    """Charge (C/m^3), azimuthal current (A/m^2) and magnetization (J/(T m^3)) of one mode."""

    def __init__(
        self,
        geometry: CavityGeometry,
        mode: ModeIndex,
        solution: RadialSolution,
        constants: PhysicalConstants = CODATA_2018,
    ):
        self.geometry = geometry
        self.mode = mode
        self.solution = solution
        self.constants = constants
        self._radial = lru_cache(maxsize=4096)(self._radial_factors)

    def _exterior_k(self, order: int, x: float) -> float:
        # kappa * K_order(xi R x) without forming K at large arguments
        arg = self.solution.xi_R * x
        return self.solution.kappa * bessel_k_scaled(order, arg) * math.exp(-arg)

    def _radial_factors(self, rho: float) -> tuple[float, float]:
        """(probability factor, current factor in 1/m) at radius rho."""
        if rho < 0.0:
            raise DomainError(f"rho must be >= 0, got {rho!r}")
        sol = self.solution
        l = self.mode.l
        x = rho / self.geometry.R
        if x <= 1.0:
            arg = sol.zeta_R * x
            jl = bessel_j(l, arg)
            return jl * jl, sol.zeta * jl * bessel_j(l + 1, arg)
        if sol.kappa == 0.0:
            return 0.0, 0.0
        kl = self._exterior_k(l, x)
        kl1 = self._exterior_k(l + 1, x)
        return kl * kl, sol.xi * kl * kl1

    def _axial(self, z: float) -> float:
        if abs(z) >= self.geometry.d:
            return 0.0
        c = math.cos(self.solution.k_m * z)
        return c * c

    def charge_density(self, rho: float, z: float) -> float:
        prob, _ = self._radial(rho)
        return -self.constants.e * self.solution.n_sq * self._axial(z) * prob

    def current_density_phi(self, rho: float, z: float) -> float:
        _, cur = self._radial(rho)
        return -2.0 * self.constants.mu_B * self.solution.n_sq * self._axial(z) * cur

    def magnetization_z(self, rho: float, z: float) -> float:
        prob, _ = self._radial(rho)
        return -self.constants.mu_B * self.solution.n_sq * self._axial(z) * prob

    def sample(self, rho: float, z: float) -> DensitySample:
        return DensitySample(
            rho,
            z,
            self.charge_density(rho, z),
            self.current_density_phi(rho, z),
            self.magnetization_z(rho, z),
        )

    def profile_rows(
        self, rho_over_R: Iterable[float], z_over_d: Iterable[float]
    ) -> list[tuple[float, float, float, float, float]]:
        """Samples on a grid, z-major then rho."""
        xs = list(rho_over_R)
        rows = []
        for s in z_over_d:
            z = s * self.geometry.d
            for x in xs:
                smp = self.sample(x * self.geometry.R, z)
                rows.append((x, s, smp.charge_density, smp.current_density_phi, smp.magnetization_z))
        return rows

    def write_csv(self, stream: TextIO, rho_over_R: Iterable[float], z_over_d: Iterable[float]) -> int:
        writer = csv.writer(stream, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        rows = self.profile_rows(rho_over_R, z_over_d)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
        return len(rows)


def volume_integral(
    integrand: Callable[[float, float, float], float],
    geometry: CavityGeometry,
    radial_breaks: list[float],
    exterior_decay: float | None,
    scale: float,
    tol: Tolerance = DEFAULT_TOLERANCE,
) -> float:
    """Iterated quadrature of integrand(rho, phi, z) * rho d rho d phi d z.

    Runs in x = rho/R and s = z/d over |s| <= 1 and phi in [0, 2 pi].  The
    radial range is split at ``radial_breaks`` (values of x) and continued to
    infinity with ``exterior_decay`` (decay rate in x) when given.  The
    integrand is divided by ``scale`` internally so absolute tolerances apply
    to an O(1) quantity.
    """
    R, d = geometry.R, geometry.d
    inv = 1.0 / scale

    def over_phi(rho: float, z: float) -> float:
        return integrate_finite(lambda p: integrand(rho, p, z) * inv, 0.0, TWO_PI, tol)

    def over_z(x: float) -> float:
        rho = R * x
        return x * integrate_finite(lambda s: over_phi(rho, d * s), -1.0, 1.0, tol)

    total = 0.0
    for lo, hi in zip(radial_breaks[:-1], radial_breaks[1:]):
        if hi > lo:
            total += integrate_finite(over_z, lo, hi, tol)
    if exterior_decay is not None:
        total += integrate_semi_infinite(over_z, radial_breaks[-1], exterior_decay, tol)
    return total * scale * R * R * d


def total_charge(densities: ModeDensities, tol: Tolerance = DEFAULT_TOLERANCE) -> float:
    """Charge of the mode (C) by iterated quadrature over the cavity and the exterior tail."""
    sol = densities.solution
    decay = None if sol.kappa == 0.0 else sol.xi_R
    # q ~ e N^2
    scale = densities.constants.e * sol.n_sq
    return volume_integral(
        lambda rho, phi, z: densities.charge_density(rho, z),
        densities.geometry, [0.0, 1.0], decay, scale, tol,
    )


def trapezoid_total_charge(
    geometry: CavityGeometry, rows: list[tuple[float, float, float, float, float]]
) -> float:
    """2*pi * double trapezoid of q*rho over a z-major grid from ``profile_rows``."""
    data = np.asarray(rows, dtype=float)
    xs = np.unique(data[:, 0])
    ss = np.unique(data[:, 1])
    q = data[:, 2].reshape(len(ss), len(xs))
    rho = xs * geometry.R
    z = ss * geometry.d
    radial = np.trapezoid(q * rho[np.newaxis, :], rho, axis=1)
    return float(2.0 * math.pi * np.trapezoid(radial, z))
