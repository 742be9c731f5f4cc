"""Exception types shared across the package."""


class DirtyPaperError(Exception):
    """Base class for all library errors."""


class InvalidParameterError(DirtyPaperError, ValueError):
    """A parameter violates its documented domain."""


class DegenerateDistributionError(DirtyPaperError):
    """A requested sub-covariance is numerically singular."""


class DegenerateConditioningError(DegenerateDistributionError):
    """The conditioning block of a Schur complement is singular."""


class NoInformationError(DirtyPaperError):
    """A combining step received observations that carry no signal."""


class DivergenceError(DirtyPaperError):
    """A bound or objective diverges at the supplied parameters."""


class RegimeViolationError(DirtyPaperError):
    """An operation requires a fading regime the instance is not in."""
