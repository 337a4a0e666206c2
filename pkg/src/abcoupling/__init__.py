"""Aharonov-Bohm coupling energy of a confined Dirac electron in a cylindrical cavity.

Two prescriptions are computed for each cavity mode and solenoid: the
magnetization-field energy (WP, ``-int M.B``) and the current-potential energy
(WE, ``-int j.A``).  Every closed form has an independent quadrature route.
"""

from .cavity_modes import (
    CODATA_2018,
    CavityGeometry,
    ModeIndex,
    PhysicalConstants,
    RadialSolution,
    solve_finite_barrier,
    solve_hard_wall,
    solve_mode,
)
from .coupling import (
    CouplingBreakdown,
    Method,
    c_l,
    f_l,
    gauge_invariance_check,
    microwave_prefactor,
    omega_scale,
    omega_we_closed,
    omega_we_quadrature,
    omega_wp_closed,
    omega_wp_quadrature,
    quadrature_breakdown,
)
from .errors import (
    ABCouplingError,
    AccuracyError,
    BracketError,
    DivergenceError,
    DomainError,
    SolverError,
    UnphysicalRegimeError,
    ValidationError,
)
from .fields import GaugeShift, ModeDensities, SolenoidConfig, total_charge

__version__ = "0.1.0"
