"""Exception types shared across the library."""


class LegendreOmdError(Exception):
    """Base class for all library errors."""


class DomainError(LegendreOmdError):
    """A point lies outside the feasible domain (beyond tolerance)."""


class ProxDomainError(DomainError):
    """A point lies outside the prox-domain (where the regularizer has a gradient)."""


class NumericalError(LegendreOmdError):
    """A numerical operation failed (overflow, unbracketed root, unbounded prox)."""


class DivergenceError(NumericalError):
    """An iterate's divergence to the solution exceeded the blow-up threshold."""


class PreconditionError(LegendreOmdError):
    """A stated precondition of an operation does not hold."""


class InsufficientDataError(LegendreOmdError):
    """Not enough valid data points for an estimate."""


class NonPositiveValuesError(LegendreOmdError):
    """Log-scale regression received non-positive values."""


class ConfigError(LegendreOmdError):
    """Invalid or incomplete run configuration."""
