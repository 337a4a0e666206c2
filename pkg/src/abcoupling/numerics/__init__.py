"""Special functions, quadrature and root finding used by the physics modules."""

from .bessel import bessel_j, bessel_k, bessel_k_ratio, bessel_k_scaled
from .quadrature import (
    DEFAULT_TOLERANCE,
    Tolerance,
    gauss_kronrod_15,
    integrate_finite,
    integrate_semi_infinite,
)
from .roots import Bracket, find_root, scan_brackets

__all__ = [
    "Bracket",
    "DEFAULT_TOLERANCE",
    "Tolerance",
    "bessel_j",
    "bessel_k",
    "bessel_k_ratio",
    "bessel_k_scaled",
    "find_root",
    "gauss_kronrod_15",
    "integrate_finite",
    "integrate_semi_infinite",
    "scan_brackets",
]
