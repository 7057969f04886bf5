"""Exception hierarchy shared by the analysis modules."""


class CarpetError(Exception):
    """Base class for every error raised by dustcarpet."""


class PatternError(CarpetError, ValueError):
    """Malformed pattern document."""


class FullGrid(PatternError):
    pass


class EmptyGrid(PatternError):
    pass


class BudgetExceeded(CarpetError):
    """A prefractal or raster would exceed the configured size budget."""


class ConnectedAttractorError(CarpetError):
    """Raised when a threshold is requested for a connected attractor."""


class ModelViolation(CarpetError):
    """Counts do not follow the D/H/V replacement-rule model."""


class NonIntegralMultiplier(ModelViolation):
    pass


class NonBinaryCoefficient(ModelViolation):
    pass


class SingularSystem(ModelViolation):
    pass


class InternalInconsistency(CarpetError):
    """Two independent computations of the same quantity disagree."""
