from __future__ import annotations

import io
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from abcoupling import CODATA_2018, DomainError, GaugeShift, ModeDensities, SolenoidConfig, ValidationError
from abcoupling.fields import CSV_COLUMNS, gauge_shifted_potential, total_charge, trapezoid_total_charge
from abcoupling.numerics import bessel_j

C = CODATA_2018


def _dens(geometry, solved, n, l, m=1):
    mode, sol = solved(geometry, n, l, m)
    return ModeDensities(geometry, mode, sol)


def test_zero_on_caps_and_axis(hard_wall, finite_u, solved):
    for geometry in (hard_wall, finite_u):
        dens = _dens(geometry, solved, 1, 1)
        for rho in (0.0, 0.3 * geometry.R, 1.2 * geometry.R):
            smp = dens.sample(rho, geometry.d)
            assert smp.charge_density == smp.current_density_phi == smp.magnetization_z == 0.0
            assert dens.charge_density(rho, -1.5 * geometry.d) == 0.0
        assert dens.charge_density(0.0, 0.0) == 0.0
        assert dens.current_density_phi(0.0, 0.3 * geometry.d) == 0.0
    d0 = _dens(hard_wall, solved, 1, 0)
    assert d0.current_density_phi(0.0, 0.0) == 0.0
    # hard wall, l = 0: current at rho = R is proportional to J_0(zeta R) = 0
    assert abs(d0.current_density_phi(hard_wall.R, 0.0)) <= 1e-14 * abs(d0.current_density_phi(0.5 * hard_wall.R, 0.0))


def test_pointwise_formulas(finite_u, solved):
    mode, sol = solved(finite_u, 1, 2, 3)
    dens = ModeDensities(finite_u, mode, sol)
    rho, z = 0.37 * finite_u.R, 0.21 * finite_u.d
    ax = math.cos(sol.k_m * z) ** 2
    j2 = bessel_j(2, sol.zeta * rho)
    assert dens.charge_density(rho, z) == pytest.approx(-C.e * sol.n_sq * ax * j2 * j2, rel=1e-14)
    assert dens.current_density_phi(rho, z) == pytest.approx(
        -2 * C.mu_B * sol.n_sq * ax * sol.zeta * j2 * bessel_j(3, sol.zeta * rho), rel=1e-14
    )


def test_magnetization_proportional_to_charge(hard_wall, finite_u, solved):
    for geometry in (hard_wall, finite_u):
        dens = _dens(geometry, solved, 2, 1)
        for x in (0.05, 0.4, 0.9, 1.0, 1.1):
            for s in (-0.7, 0.0, 0.5):
                q = dens.charge_density(x * geometry.R, s * geometry.d)
                mz = dens.magnetization_z(x * geometry.R, s * geometry.d)
                if q != 0.0:
                    assert mz / q == pytest.approx(C.mu_B / C.e, rel=1e-14)
                    assert mz < 0.0 and q < 0.0


@given(st.floats(0.0, 3.0), st.floats(-1.2, 1.2), st.integers(0, 4))
def test_signs(x, s, l):
    from abcoupling import CavityGeometry, ModeIndex, solve_mode

    g = CavityGeometry.from_nm(100.0, 100.0, 1e-3)
    mode = ModeIndex(1, l, 1)
    dens = ModeDensities(g, mode, solve_mode(g, mode))
    assert dens.charge_density(x * g.R, s * g.d) <= 0.0
    assert dens.magnetization_z(x * g.R, s * g.d) <= 0.0
    # single-signed current holds for nodeless radial profiles (n = 1)
    assert dens.current_density_phi(x * g.R, s * g.d) <= 0.0


def test_continuity_at_wall(finite_u, solved):
    from abcoupling import CavityGeometry

    mc2 = C.rest_energy
    for l in range(5):
        dens = _dens(finite_u, solved, 1, l)
        R = finite_u.R
        (q_in, j_in), (q_out, j_out) = dens._radial_factors(R), dens._radial_factors(R * (1 + 1e-15))
        assert q_out == pytest.approx(q_in, rel=1e-10)
        # the current jump is the lower-component energy-factor ratio of the matching condition
        eps = dens.solution.kinetic_energy
        expected = (2.0 + (eps - finite_u.U) / mc2) / (2.0 + eps / mc2)
        assert j_out / j_in == pytest.approx(expected, rel=1e-12)
    shallow = CavityGeometry.from_nm(100.0, 100.0, 5e-5)
    for l in range(2):
        dens = _dens(shallow, solved, 1, l)
        (q_in, j_in), (q_out, j_out) = dens._radial_factors(shallow.R), dens._radial_factors(shallow.R * (1 + 1e-15))
        assert q_out == pytest.approx(q_in, rel=1e-10)
        assert j_out == pytest.approx(j_in, rel=1e-10)


@pytest.mark.parametrize("l", [0, 1, 2, 3])
def test_current_axis_scaling(hard_wall, solved, l):
    dens = _dens(hard_wall, solved, 1, l)
    xs = np.logspace(-5, -3, 7)
    js = [abs(dens.current_density_phi(x * hard_wall.R, 0.0)) for x in xs]
    slope = np.polyfit(np.log(xs), np.log(js), 1)[0]
    assert abs(slope - (2 * l + 1)) <= 0.05


@pytest.mark.parametrize("n,l,m", [(1, 0, 1), (2, 3, 1), (1, 1, 5)])
def test_total_charge(hard_wall, finite_u, solved, n, l, m):
    for geometry in (hard_wall, finite_u):
        dens = _dens(geometry, solved, n, l, m)
        assert total_charge(dens) == pytest.approx(-C.e, rel=1e-9)


def test_trapezoid_charge_and_csv(finite_u, solved):
    dens = _dens(finite_u, solved, 1, 1)
    xs = np.linspace(0.0, 2.0, 801)
    ss = np.linspace(-1.0, 1.0, 401)
    rows = dens.profile_rows(xs, ss)
    assert trapezoid_total_charge(finite_u, rows) / -C.e == pytest.approx(1.0, rel=1e-4)
    buf = io.StringIO()
    count = dens.write_csv(buf, [0.0, 0.5], [0.0, 1.0])
    lines = buf.getvalue().splitlines()
    assert count == 4 and lines[0] == ",".join(CSV_COLUMNS)
    # z-major order, 17 significant digits round-trip
    assert [tuple(map(float, ln.split(",")[:2])) for ln in lines[1:]] == [(0, 0), (0.5, 0), (0, 1), (0.5, 1)]
    assert float(lines[2].split(",")[2]) == dens.charge_density(0.5 * finite_u.R, 0.0)


def test_negative_rho_rejected(hard_wall, solved):
    with pytest.raises(DomainError):
        _dens(hard_wall, solved, 1, 0).charge_density(-1e-9, 0.0)


def test_solenoid_profiles():
    phi, a = 2.5e-15, 1e-8
    cfg = SolenoidConfig(phi, a)
    assert cfg.vector_potential_phi(a) == pytest.approx(phi / (2 * math.pi * a), rel=1e-15)
    assert cfg.vector_potential_phi(a * (1 + 1e-12)) == pytest.approx(phi / (2 * math.pi * a), rel=1e-11)
    assert cfg.vector_potential_phi(2 * a) == pytest.approx(phi / (4 * math.pi * a), rel=1e-15)
    assert SolenoidConfig(0.0, a).vector_potential_phi(3 * a) == 0.0
    assert cfg.magnetic_field_z(a / 2) == pytest.approx(phi / (math.pi * a * a), rel=1e-15)
    assert cfg.magnetic_field_z(1.01 * a) == 0.0
    with pytest.raises(DomainError):
        SolenoidConfig(phi, 0.0).vector_potential_phi(0.0)
    with pytest.raises(DomainError):
        SolenoidConfig(phi, 0.0).magnetic_field_z(1e-9)
    with pytest.raises(ValidationError):
        SolenoidConfig(phi, -1.0)
    with pytest.raises(ValidationError):
        SolenoidConfig(math.nan, 1.0)


@given(st.floats(1e-3, 10.0), st.floats(1e-3, 5.0))
def test_stokes_consistency(rho_over_a, flux):
    a = 1e-8
    cfg = SolenoidConfig(flux, a)
    rho = rho_over_a * a
    loop = 2 * math.pi * rho * cfg.vector_potential_phi(rho)
    expected = flux if rho > a else flux * rho * rho / (a * a)
    assert loop == pytest.approx(expected, rel=1e-14)


def test_flux_through_core_matches_field():
    from abcoupling.numerics import integrate_finite

    a, phi = 2e-8, 3e-15
    cfg = SolenoidConfig(phi, a)
    enclosed = integrate_finite(lambda r: 2 * math.pi * r * cfg.magnetic_field_z(r), 0.0, a)
    assert enclosed == pytest.approx(2 * math.pi * 1.5 * a * cfg.vector_potential_phi(1.5 * a), rel=1e-13)


def test_gauge_shift_components():
    R, d = 1e-7, 1e-7
    cfg = SolenoidConfig(1e-15, 1e-8)
    zero = GaugeShift(0.0, lambda x: x * x, lambda s: math.cos(math.pi * s / 2), R, d)
    assert gauge_shifted_potential(cfg, zero, 0.5 * R, 1.0, 0.1 * d) == (0.0, cfg.vector_potential_phi(0.5 * R), 0.0)
    flat = GaugeShift(3e-15, lambda x: x * x + 1.0, lambda s: 1.0 + s, R, d,
                      angular=lambda p: 1.0, angular_derivative=lambda p: 0.0)
    assert gauge_shifted_potential(cfg, flat, 0.5 * R, 1.0, 0.1 * d)[1] == cfg.vector_potential_phi(0.5 * R)
    amp = 1e-15
    shift = GaugeShift(amp, lambda x: x * x, lambda s: math.cos(math.pi * s / 2), R, d)
    for rho in (0.0, 1e-12, 0.3 * R, R):
        comps = shift.gradient(rho, 0.7, 0.2 * d)
        assert all(math.isfinite(c) for c in comps)
    rho, phi, z = 0.3 * R, 0.7, 0.2 * d
    g_rho, g_phi, g_z = shift.gradient(rho, phi, z)
    h = math.cos(math.pi * z / (2 * d))
    assert g_phi == pytest.approx(amp * (rho / R) ** 2 * math.cos(phi) * h / rho, rel=1e-12)
    assert g_rho == pytest.approx(amp * 2 * rho / R ** 2 * math.sin(phi) * h, rel=1e-8)
    assert g_z == pytest.approx(-amp * (rho / R) ** 2 * math.sin(phi) * math.pi / (2 * d) * math.sin(math.pi * z / (2 * d)), rel=1e-8)
    with pytest.raises(ValidationError):
        GaugeShift(amp, lambda x: 1.0 + x, lambda s: 1.0, R, d)
