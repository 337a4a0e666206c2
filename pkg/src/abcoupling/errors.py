"""Exception hierarchy shared by the numerics, physics and CLI layers.

The CLI maps each family to a fixed exit code (see ``EXIT_CODES``).
"""

from __future__ import annotations


class ABCouplingError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(ABCouplingError, ValueError):
    """An input violates a documented invariant (bad quantum number, a >= R, ...)."""


class DomainError(ValidationError):
    """Argument outside the supported domain of a numerical kernel."""


class SolverError(ABCouplingError):
    """Root bracketing or eigenvalue search failed."""


class BracketError(SolverError):
    """The supplied bracket shows no sign change."""


class UnphysicalRegimeError(SolverError):
    """Requested energy window yields zeta^2 <= 0 or xi^2 <= 0."""


class AccuracyError(ABCouplingError):
    """A quadrature or iteration hit its refinement cap before converging.

    ``estimate`` and ``error`` carry the best value found and its error bound.
    """

    def __init__(self, message: str, estimate: float = float("nan"), error: float = float("inf")):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class DivergenceError(ABCouplingError):
    """The requested quantity diverges (e.g. F_0 at zero core radius)."""


EXIT_CODES = {
    ValidationError: 2,
    SolverError: 3,
    AccuracyError: 4,
    DivergenceError: 4,
    OSError: 5,
}


def exit_code_for(exc: BaseException) -> int:
    for cls, code in EXIT_CODES.items():
        if isinstance(exc, cls):
            return code
    return 1
