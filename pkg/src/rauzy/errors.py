"""Exception hierarchy shared by all modules."""


class RauzyError(Exception):
    """Base class for every error raised by this package."""


class PrecisionExhausted(RauzyError):
    """An interval still straddles zero at the top of the precision ladder.

    This usually means the basis witnesses satisfy a rational relation that
    the surface description claims they do not.  ``step`` is filled in when
    the failure happens inside an orbit.
    """

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step

    def __str__(self):
        base = super().__str__()
        if self.step is not None:
            return f"{base} (at step {self.step})"
        return base


class NotAPermutation(RauzyError, ValueError):
    pass


class RauzyUndefined(RauzyError):
    """Forward induction is undefined: the two last intervals have equal length."""


class OrbitStops(RauzyError):
    """Backward induction is undefined: the suspension data sums to zero."""


class OutOfDomain(RauzyError, ValueError):
    pass


class NonPositiveHeight(RauzyError):
    pass


class NonSimplePolygon(RauzyError):
    """The two broken lines of the polygon cross, so planar tracing is unsound."""


class ValidationError(RauzyError, ValueError):
    """A surface description violates one of the structural invariants."""

    def __init__(self, reason, detail=None):
        super().__init__(reason)
        self.reason = reason
        self.detail = detail


class ParseError(RauzyError, ValueError):
    pass
