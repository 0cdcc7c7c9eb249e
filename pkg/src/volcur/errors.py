"""Exception hierarchy.

Three top-level families map onto the CLI exit codes: ValidationError (1,
bad inputs), NumericalError (2, computation cannot proceed or failed), and
CapExceededError (3, a work cap would be blown).
"""


class VolcurError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(VolcurError, ValueError):
    """Input violates a documented precondition or file format."""


class NumericalError(VolcurError, ArithmeticError):
    """A numerical computation is undefined or did not succeed."""


class CapExceededError(VolcurError):
    """Requested work exceeds a hard enumeration or size cap."""


class DegenerateTailError(ValidationError):
    """Head/tail split requested at a pivot eigenvalue that is zero."""


class BoundInapplicableError(ValidationError):
    """A majorant bound was requested but domination fails; the message
    names the first violating index."""


class RankDeficiencyError(NumericalError):
    """An ESP ratio e_{k+1}/e_k is undefined because e_k = 0."""


class SingularPivotError(NumericalError):
    """A pivot block is numerically singular (condition estimate > 1e14)."""


class DegenerateDistributionError(NumericalError):
    """Volume sampling at rank k is degenerate: every k-subset has zero
    volume (k exceeds the matrix rank)."""


class EigensolverError(NumericalError):
    """The eigensolver failed to converge."""
