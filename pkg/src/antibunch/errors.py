"""Exception types shared across the package."""


class AntibunchError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(AntibunchError):
    """Operator or state dimensions are invalid or inconsistent."""


class SteadyStateError(AntibunchError):
    """The steady-state solve failed or did not yield a unique state."""


class UndefinedCorrelationError(AntibunchError):
    """g2 is undefined because the mode carries no photons."""


class IntegrationError(AntibunchError):
    """Time integration failed; ``last_time`` holds the last good time."""

    def __init__(self, message, last_time):
        super().__init__(message)
        self.last_time = last_time


class NoRealSolutionError(AntibunchError):
    """The interference-optimum formulas have no real solution.

    ``reason`` is "radicand" when the detuning radicand is negative
    (g < kappa/sqrt(2)) and "denominator" when the nonlinearity
    denominator vanishes (g = kappa/sqrt(2) exactly).
    """

    def __init__(self, message, reason):
        super().__init__(message)
        self.reason = reason


class DegenerateParametersError(AntibunchError):
    """The truncated amplitude system is singular at these parameters."""


class ConfigError(AntibunchError):
    """A run configuration file or override is invalid.

    ``line`` is the 1-based line number in the source file when the error
    can be tied to one, else None.
    """

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class TaskError(AntibunchError):
    """A sweep task failed as a whole (e.g. every grid point failed)."""
