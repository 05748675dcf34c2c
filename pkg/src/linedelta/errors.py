"""Exception hierarchy shared by all modules."""


class LineDeltaError(Exception):
    """Base class for every error raised by this package."""


class AllZero(LineDeltaError, ValueError):
    pass


class InvalidLeading(LineDeltaError, ValueError):
    pass


class DegenerateAffine(LineDeltaError, ValueError):
    pass


class DegreeTooLow(LineDeltaError, ValueError):
    pass


class NoConvergence(LineDeltaError, RuntimeError):
    """Root iteration failed; carries whatever was computed."""

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics or {}


class ZeroStep(LineDeltaError, ValueError):
    pass


class InvalidOperator(LineDeltaError, ValueError):
    pass


class NotUnitCircle(LineDeltaError, ValueError):
    pass


class EmptyRootList(LineDeltaError, ValueError):
    pass


class OutOfRange(LineDeltaError, ValueError):
    pass


class Underdetermined(LineDeltaError, ValueError):
    pass


class NotReal(LineDeltaError, ValueError):
    pass


class LengthMismatch(LineDeltaError, ValueError):
    pass


class DegreeMismatch(LineDeltaError, ValueError):
    pass


class NotHyperbolic(LineDeltaError, ValueError):
    pass


class NoSolution(LineDeltaError, ValueError):
    pass


class OrderUnsupported(LineDeltaError, ValueError):
    pass


class AmbiguousMatching(LineDeltaError, RuntimeError):
    pass


class PreconditionError(LineDeltaError, ValueError):
    pass
