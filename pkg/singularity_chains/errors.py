"""Exception hierarchy for singularity-chains.

Configuration problems derive from ValueError and numerical failures from
ArithmeticError, so callers can catch either family without importing this
module. The CLI maps the two families to exit codes 2 and 3.
"""

from typing import Any, Optional


class SingularityChainError(Exception):
    """Base class for all errors raised by the package."""


class ConfigurationError(SingularityChainError, ValueError):
    """Invalid parameters, inputs or options."""


class DegenerateParametersError(ConfigurationError):
    """Parameters at which a formula divides by zero."""


class DomainError(ConfigurationError):
    """A formula evaluated outside its domain (negative radicand etc.)."""


class ResonanceError(ConfigurationError):
    """Omega0 sits on a resonant denominator of the first approximation."""


class InvalidParameterError(ConfigurationError):
    """A parameter violates a documented precondition."""


class TrackError(ConfigurationError):
    """An observed track is unusable (too short, unordered, duplicated)."""


class UnknownSuiteError(ConfigurationError):
    """An acceptance suite name that does not exist."""


class NumericalError(SingularityChainError, ArithmeticError):
    """Base class for failures of the numerics."""


class SingularStateError(NumericalError):
    """A chain state at which the right-hand side is undefined."""


class StiffnessError(NumericalError):
    """The adaptive integrator could not find an admissible step."""


class PhysicalityError(NumericalError):
    """The geopotential lost positivity; the partial series is attached."""

    def __init__(self, message: str, partial: Optional[Any] = None) -> None:
        super().__init__(message)
        self.partial = partial


class ShockTrackingError(NumericalError):
    """No admissible jump could be located in an oracle profile."""


class StabilityError(NumericalError):
    """A Hill potential outside the stability region."""


class DegeneracyError(NumericalError):
    """A degenerate configuration (Jordan-block monodromy, circular vortex)."""


class InvalidMonodromyError(NumericalError):
    """A monodromy matrix whose determinant is far from one."""


class FitFailureError(NumericalError):
    """A fit failed in every restart, or an unconverged fit was used for prediction."""
