"""Cavity geometry, mode labels and the radial eigenvalue problem.

All radial work happens in the dimensionless variables zeta*R and xi*R; SI
values are produced only when a ``RadialSolution`` is assembled.

Energies near the rest mass are never formed as differences of large numbers:
the kinetic part eps = E - m_e c^2 is carried separately and
E^2 - (m_e c^2)^2 is evaluated as eps*(eps + 2 m_e c^2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BracketError, SolverError, UnphysicalRegimeError, ValidationError
from .numerics import (
    Bracket,
    Tolerance,
    bessel_j,
    bessel_k,
    bessel_k_scaled,
    find_root,
    scan_brackets,
)

# roots are polished to a few ulps; Tolerance.rel must stay > 0
_ROOT_TOL = Tolerance(rel=4.0e-16, abs=0.0)
# beyond this the exterior tail underflows and the barrier is a hard wall in practice
_MAX_XI_R = 700.0


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float
    c: float
    m_e: float
    e: float

    @property
    def h(self) -> float:
        return 2.0 * math.pi * self.hbar

    @property
    def mu_B(self) -> float:
        return self.e * self.hbar / (2.0 * self.m_e)

    @property
    def Phi0(self) -> float:
        return self.h / self.e

    @property
    def rest_energy(self) -> float:
        return self.m_e * self.c ** 2

    @property
    def hbar_c(self) -> float:
        return self.hbar * self.c


# CODATA 2018 (e, h, c exact)
CODATA_2018 = PhysicalConstants(
    hbar=6.62607015e-34 / (2.0 * math.pi),
    c=299792458.0,
    m_e=9.1093837015e-31,
    e=1.602176634e-19,
)

EV = CODATA_2018.e


@dataclass(frozen=True)
class CavityGeometry:
    """Cylinder of radius R and height 2d; side barrier U (``math.inf`` = hard wall)."""

    R: float
    d: float
    U: float = math.inf

    def __post_init__(self) -> None:
        if not (self.R > 0 and math.isfinite(self.R)):
            raise ValidationError(f"cavity radius must be positive, got {self.R!r}")
        if not (self.d > 0 and math.isfinite(self.d)):
            raise ValidationError(f"half-height must be positive, got {self.d!r}")
        if not self.U > 0:
            raise ValidationError(f"barrier height must be positive or infinite, got {self.U!r}")

    @property
    def hard_wall(self) -> bool:
        return math.isinf(self.U)

    @classmethod
    def from_nm(cls, R_nm: float, d_nm: float, U_eV: float | None = None) -> "CavityGeometry":
        U = math.inf if U_eV is None else U_eV * EV
        return cls(R=R_nm * 1e-9, d=d_nm * 1e-9, U=U)

    def scaled(self, s: float) -> "CavityGeometry":
        return CavityGeometry(self.R * s, self.d * s, self.U)


@dataclass(frozen=True)
class ModeIndex:
    n: int
    l: int
    m: int

    def __post_init__(self) -> None:
        for name in ("n", "l", "m"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ValidationError(f"mode index {name} must be an integer, got {value!r}")
        if self.n < 1:
            raise ValidationError(f"radial index n must be >= 1, got {self.n}")
        if self.l < 0:
            raise ValidationError(f"angular index l must be >= 0, got {self.l}")
        if self.m < 1 or self.m % 2 == 0:
            raise ValidationError(f"axial index m must be a positive odd integer, got {self.m}")

    def __str__(self) -> str:
        return f"({self.n},{self.l},{self.m})"


@dataclass(frozen=True)
class RadialSolution:
    """Eigenmode parameters.  ``xi_R`` is ``inf`` and ``kappa`` is 0 for a hard wall."""

    zeta_R: float
    xi_R: float
    kappa: float
    n_sq: float
    energy: float
    kinetic_energy: float
    k_m: float
    R: float

    @property
    def zeta(self) -> float:
        return self.zeta_R / self.R

    @property
    def xi(self) -> float:
        return self.xi_R / self.R

    @property
    def hard_wall(self) -> bool:
        return self.kappa == 0.0


def axial_wavenumber(geometry: CavityGeometry, mode: ModeIndex) -> float:
    """k_m = m*pi/(2d) for odd m (cos(k_m z) vanishes at z = +-d)."""
    if mode.m % 2 == 0:  # ModeIndex already refuses this; keep the guard for duck-typed input
        raise ValidationError(f"axial index must be odd, got {mode.m}")
    return mode.m * math.pi / (2.0 * geometry.d)


def _kinetic_from_zeta_R(zeta_R: float, k_R: float, geometry: CavityGeometry, const: PhysicalConstants) -> float:
    p_sq = (const.hbar_c / geometry.R) ** 2 * (zeta_R ** 2 + k_R ** 2)
    mc2 = const.rest_energy
    return p_sq / (mc2 + math.sqrt(mc2 * mc2 + p_sq))


def _zeta_R_sq_from_kinetic(eps: float, k_R: float, geometry: CavityGeometry, const: PhysicalConstants) -> float:
    return eps * (eps + 2.0 * const.rest_energy) * (geometry.R / const.hbar_c) ** 2 - k_R ** 2


def _xi_R_sq_from_kinetic(eps: float, k_R: float, geometry: CavityGeometry, const: PhysicalConstants) -> float:
    below = geometry.U - eps
    return k_R ** 2 + below * (2.0 * const.rest_energy - below) * (geometry.R / const.hbar_c) ** 2


def normalization_bracket(l: int, zeta_R: float, xi_R: float, kappa: float) -> float:
    """-J_{l-1}J_{l+1}(zeta R) + kappa^2 K_{l-1}K_{l+1}(xi R); must be positive."""
    interior = -bessel_j(l - 1, zeta_R) * bessel_j(l + 1, zeta_R)
    if kappa == 0.0:
        return interior
    return interior + kappa * kappa * bessel_k(l - 1, xi_R) * bessel_k(l + 1, xi_R)


def normalization(
    geometry: CavityGeometry, mode: ModeIndex, zeta: float, xi: float, kappa: float
) -> float:
    """Closed-form N^2 (1/m^3) fixing the total charge to -e."""
    bracket = normalization_bracket(mode.l, zeta * geometry.R, xi * geometry.R, kappa)
    if not bracket > 0.0:
        raise ValidationError(
            f"normalization bracket {bracket!r} <= 0 for mode {mode}: inconsistent parameters"
        )
    return 1.0 / (math.pi * geometry.R ** 2 * geometry.d * bracket)


def bessel_j_zero(l: int, n: int) -> float:
    """n-th positive zero of J_l, bracketed by a 0.1-step scan and polished by Brent."""
    x = 0.5 * (l + 1)
    f = lambda t: bessel_j(l, t)  # noqa: E731
    fx = f(x)
    found = 0
    while True:
        nxt = x + 0.1
        fn = f(nxt)
        if (fx > 0.0) != (fn > 0.0) or fn == 0.0:
            found += 1
            if found == n:
                return find_root(f, Bracket(x, nxt), _ROOT_TOL)
        x, fx = nxt, fn


def _assemble(
    geometry: CavityGeometry,
    mode: ModeIndex,
    const: PhysicalConstants,
    zeta_R: float,
    xi_R: float,
    kappa: float,
    k_m: float,
) -> RadialSolution:
    eps = _kinetic_from_zeta_R(zeta_R, k_m * geometry.R, geometry, const)
    n_sq = normalization(geometry, mode, zeta_R / geometry.R, xi_R / geometry.R, kappa)
    return RadialSolution(
        zeta_R=zeta_R,
        xi_R=xi_R,
        kappa=kappa,
        n_sq=n_sq,
        energy=const.rest_energy + eps,
        kinetic_energy=eps,
        k_m=k_m,
        R=geometry.R,
    )


def solve_hard_wall(
    geometry: CavityGeometry, mode: ModeIndex, constants: PhysicalConstants = CODATA_2018
) -> RadialSolution:
    """Impenetrable side wall: zeta*R is the n-th zero of J_l and kappa = 0."""
    if not geometry.hard_wall:
        raise ValidationError("solve_hard_wall needs a geometry with U = inf")
    k_m = axial_wavenumber(geometry, mode)
    try:
        zeta_R = bessel_j_zero(mode.l, mode.n)
    except BracketError as exc:  # pragma: no cover - the scan always brackets
        raise SolverError(f"could not bracket zero {mode.n} of J_{mode.l}") from exc
    return _assemble(geometry, mode, constants, zeta_R, math.inf, 0.0, k_m)


class _FiniteBarrier:
    """Matching problem for one (geometry, l, m) at finite U, in zeta*R."""

    def __init__(self, geometry: CavityGeometry, mode: ModeIndex, const: PhysicalConstants):
        self.geometry = geometry
        self.l = mode.l
        self.const = const
        self.k_m = axial_wavenumber(geometry, mode)
        self.k_R = self.k_m * geometry.R

    def kinetic(self, zeta_R: float) -> float:
        return _kinetic_from_zeta_R(zeta_R, self.k_R, self.geometry, self.const)

    def xi_R_sq(self, zeta_R: float) -> float:
        return _xi_R_sq_from_kinetic(self.kinetic(zeta_R), self.k_R, self.geometry, self.const)

    def zeta_R_max(self) -> float:
        """Largest zeta*R for which the exterior is still evanescent."""
        hi = 1.0
        while self.xi_R_sq(hi) > 0.0:
            hi *= 2.0
            if hi > 1e8:
                raise UnphysicalRegimeError("barrier too high to bracket the bound-state window")
        if self.xi_R_sq(0.0) <= 0.0:
            raise UnphysicalRegimeError(
                "no bound states: barrier below the axial zero-point energy"
            )
        return find_root(self.xi_R_sq, Bracket(0.0, hi), _ROOT_TOL)

    def matching(self, zeta_R: float) -> float:
        """Lower-component continuity with kappa = J_l(zeta R)/K_l(xi R) substituted.

        zeta J_{l+1} K_l/(E + mc^2) - xi J_l K_{l+1}/(E - U + mc^2), divided by
        K_l(xi R) and multiplied by R*mc^2 so that it stays O(1).
        """
        l = self.l
        eps = self.kinetic(zeta_R)
        xi_R = math.sqrt(self.xi_R_sq(zeta_R))
        mc2 = self.const.rest_energy
        inner = zeta_R * bessel_j(l + 1, zeta_R) / (2.0 + eps / mc2)
        ratio = bessel_k_scaled(l + 1, xi_R) / bessel_k_scaled(l, xi_R)
        outer = xi_R * bessel_j(l, zeta_R) * ratio / (2.0 + (eps - self.geometry.U) / mc2)
        return inner - outer

    def zeta_R_from_kinetic(self, eps: float) -> float:
        z_sq = _zeta_R_sq_from_kinetic(eps, self.k_R, self.geometry, self.const)
        x_sq = _xi_R_sq_from_kinetic(eps, self.k_R, self.geometry, self.const)
        if z_sq <= 0.0 or x_sq <= 0.0:
            raise UnphysicalRegimeError(
                f"kinetic energy {eps!r} J gives zeta^2*R^2={z_sq!r}, xi^2*R^2={x_sq!r}"
            )
        return math.sqrt(z_sq)

    def roots(self, count: int) -> list[float]:
        top = self.zeta_R_max()
        npts = max(400, int(40 * top))
        lo = top * 1e-6
        hi = top * (1.0 - 1e-9)
        grid = [lo + (hi - lo) * i / npts for i in range(npts + 1)]
        found = []
        for br in scan_brackets(self.matching, grid):
            found.append(find_root(self.matching, br, _ROOT_TOL))
            if len(found) == count:
                break
        return found


def solve_finite_barrier(
    geometry: CavityGeometry,
    mode: ModeIndex,
    energy_bracket: Bracket | None = None,
    constants: PhysicalConstants = CODATA_2018,
) -> RadialSolution:
    """Bound state of a finite side barrier.

    Without ``energy_bracket`` the bound-state window is scanned in zeta*R and
    the n-th root by increasing energy is returned.  An explicit bracket is in
    joules of kinetic energy E - m_e c^2 (the total energy cannot resolve
    micro-eV splittings on top of 511 keV) and must contain one root.
    """
    if geometry.hard_wall:
        raise ValidationError("solve_finite_barrier needs a finite barrier U")
    problem = _FiniteBarrier(geometry, mode, constants)
    if energy_bracket is None:
        roots = problem.roots(mode.n)
        if len(roots) < mode.n:
            raise SolverError(
                f"only {len(roots)} bound state(s) for l={mode.l}, m={mode.m}; n={mode.n} requested"
            )
        zeta_R = roots[mode.n - 1]
    else:
        z_lo = problem.zeta_R_from_kinetic(energy_bracket.lo)
        z_hi = problem.zeta_R_from_kinetic(energy_bracket.hi)
        zeta_R = find_root(problem.matching, Bracket(z_lo, z_hi), _ROOT_TOL)
    xi_R = math.sqrt(problem.xi_R_sq(zeta_R))
    if xi_R > _MAX_XI_R:
        raise UnphysicalRegimeError(
            f"xi*R = {xi_R:.1f}: exterior tail underflows, treat the barrier as a hard wall"
        )
    kappa = bessel_j(mode.l, zeta_R) / bessel_k(mode.l, xi_R)
    return _assemble(geometry, mode, constants, zeta_R, xi_R, kappa, problem.k_m)


def solve_mode(
    geometry: CavityGeometry,
    mode: ModeIndex,
    constants: PhysicalConstants = CODATA_2018,
    energy_bracket: Bracket | None = None,
) -> RadialSolution:
    if geometry.hard_wall:
        return solve_hard_wall(geometry, mode, constants)
    return solve_finite_barrier(geometry, mode, energy_bracket, constants)
