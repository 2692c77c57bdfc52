"""Exception hierarchy shared by all evaluation routes."""


class SyncFnError(Exception):
    """Base class for every error raised by :mod:`syncfn`."""


class DomainError(SyncFnError, ValueError):
    """Argument outside the domain of the requested function."""


class PoleError(SyncFnError, ValueError):
    """A gamma factor or hypergeometric lower parameter sits on a pole."""


class OrderIsInteger(SyncFnError, ValueError):
    """The I_{+nu}/I_{-nu} combination is undefined for integer order."""


class MaxTermsExceeded(SyncFnError, RuntimeError):
    """A convergent series did not meet its tolerance within the term cap."""


class ImmediateDivergence(SyncFnError, ArithmeticError):
    """The second term of a divergent series already exceeds the first.

    No truncation of the series is useful at this argument; the caller
    should switch to another regime.
    """


class CancellationLoss(SyncFnError, ArithmeticError):
    """Rounding error from cancelling terms exceeds the requested tolerance.

    The computed (but untrustworthy) result is attached as ``result`` so a
    dispatcher can inspect the estimate before escalating precision.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ToleranceNotMet(SyncFnError, RuntimeError):
    """Adaptive quadrature ran out of subdivisions before meeting tolerance."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result
