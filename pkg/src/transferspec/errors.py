"""Exception types shared across the package.

Every error raised by the library is a subclass of TransferOperatorError,
so callers can catch one type at the API boundary. The CLI maps
DescriptorError to exit code 2 (unusable input) and everything else to
exit code 1 (a computation that ran but failed its contract).
"""


class TransferOperatorError(Exception):
    """Base class for all library errors."""


class InvalidDomain(TransferOperatorError):
    """Ball domain with non-positive radius, wrong dimension, or bad center."""


class DegenerateMap(TransferOperatorError):
    """Moebius/affine coefficients with zero determinant; not a map."""


class InadmissibleDomain(TransferOperatorError):
    """A parametric family rejected the proposed domain (poles inside, or
    branch images not strictly inside the ball)."""


class BadIndex(TransferOperatorError):
    """Word letter outside the system's (truncated) alphabet, or an empty word."""


class NoConvergence(TransferOperatorError):
    """Fixed-point iteration did not reach the requested tolerance."""


class EscapedDomain(TransferOperatorError):
    """An iterate left the ball; the input was not a certified self-map."""


class BudgetExceeded(TransferOperatorError):
    """The word count |alphabet|^n is larger than the configured budget.

    Raised instead of silently truncating the word sum."""


class NotContracting(TransferOperatorError):
    """The sampled contraction factor is >= 1, so the adapted metric of the
    requested order does not exist."""


class NotEnclosed(TransferOperatorError):
    """Branch images are not contained in a strictly smaller concentric ball."""


class DimensionUnsupported(TransferOperatorError):
    """Operation implemented for ambient dimension 1 only."""


class WrongDimension(TransferOperatorError):
    """A bound evaluator specific to one dimension was called with another."""


class SolverFailure(TransferOperatorError):
    """The dense eigensolver did not converge."""


class RootFindingFailure(TransferOperatorError):
    """Simultaneous root iteration failed its residual contract."""


class DescriptorError(TransferOperatorError, ValueError):
    """Malformed JSON system descriptor or run configuration."""
