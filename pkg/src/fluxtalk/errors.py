"""Exception types shared across the toolkit.

Errors that reject bad inputs derive from ValueError; errors raised when an
analysis cannot produce a result derive from RuntimeError. Everything is
catchable as FluxtalkError.
"""


class FluxtalkError(Exception):
    """Base class for all fluxtalk errors."""


class DomainError(FluxtalkError, ValueError):
    """A physical parameter is outside its allowed domain."""


class DegenerateAsymmetryError(DomainError):
    """Junction asymmetry d = 1: the flux arch collapses and cannot be inverted."""


class RangeError(FluxtalkError, ValueError):
    """A requested target lies outside the attainable band (message names the band)."""


class DimensionError(FluxtalkError, ValueError):
    """Vector/matrix dimensions do not match."""


class SingularMatrixError(FluxtalkError, ValueError):
    """Matrix is singular or its determinant is below the configured floor."""


class PoleError(FluxtalkError, ValueError):
    """A denominator is too close to zero (message names the offending term)."""


class PairingError(FluxtalkError, ValueError):
    """Crosstalk estimates do not form exactly one entry per ordered pair."""


class ConfigError(FluxtalkError, ValueError):
    """Scenario configuration is invalid."""


class FitError(FluxtalkError, RuntimeError):
    """A least-squares fit failed to converge."""


class EmptyResultError(FluxtalkError, RuntimeError):
    """Every column of a scan was rejected; nothing to analyze."""


class InsufficientRidgeError(FluxtalkError, RuntimeError):
    """Fewer than three usable ridge columns; slope cannot be regressed."""


class NoSignalError(FluxtalkError, RuntimeError):
    """No off-DC fringe peak found in the Fourier map."""


class FlatTraceError(FluxtalkError, RuntimeError):
    """Time trace carries no oscillation to fit."""


class IdentifiabilityError(FluxtalkError, RuntimeError):
    """Data constrain the model only one-sidedly; parameters are not identifiable."""
