"""Exception types raised across the package."""


class TunnelkitError(Exception):
    """Base class for all package errors."""


class DomainError(TunnelkitError, ValueError):
    """An argument lies outside the domain where a quantity is defined."""


class ConfigError(TunnelkitError, ValueError):
    """Invalid run configuration or grid specification."""


class LevelNotTrappedError(DomainError):
    """The requested Bohr-Sommerfeld level lies above the barrier top."""


class SolverError(TunnelkitError, RuntimeError):
    """A root finder or iterative solver failed to converge."""


class DivergenceError(SolverError):
    """A time stepper produced non-finite values."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InversionError(SolverError):
    """The critical-current inversion found no admissible solution."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals
