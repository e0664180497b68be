"""Exception types shared across the package.

Kept dependency-free so both the compiled and the pure-Python kernel can
raise the same exceptions.
"""


class GstabError(Exception):
    """Base class for all package errors."""


class ContextMismatchError(GstabError):
    """Operands belong to different ring contexts."""


class ExponentOverflowError(GstabError):
    """An exponent exceeded the fixed per-variable width.

    Raised as a hard error instead of wrapping around silently.
    """


class BudgetExhaustedError(GstabError):
    """A pair/step budget ran out before the computation finished.

    The partial state is discarded: a budget failure is never a wrong
    answer, only a refusal.
    """


class TripwireError(GstabError):
    """Two independent computations of the same invariant disagreed.

    This always indicates a bug in the artifact, never bad input.
    """


class ScopeError(GstabError):
    """The requested exact computation is outside the supported regime."""


class InconclusiveError(GstabError):
    """A scan window was too small to certify the requested value."""


class ParseError(GstabError):
    """Positioned syntax or validation error in a module file."""

    def __init__(self, message, line=None, col=None):
        self.line = line
        self.col = col
        if line is not None:
            message = "line %d, col %d: %s" % (line, col if col is not None else 0, message)
        super().__init__(message)
