"""Exception hierarchy shared by every module."""


class FsmapsError(Exception):
    """Base class for all errors raised by fsmaps."""

    exit_code = 2


class NotInvertible(FsmapsError, ArithmeticError):
    def __init__(self, msg="element is not invertible", gcd=None):
        super().__init__(msg)
        self.gcd = gcd


class NonSquareLeading(FsmapsError, ArithmeticError):
    pass


class NonUnitLinearTerm(FsmapsError, ArithmeticError):
    pass


class PrecisionError(FsmapsError, ArithmeticError):
    """A coefficient was requested beyond the known truncation window."""


class TruncationMismatch(FsmapsError):
    pass


class NoConvergence(FsmapsError):
    pass


class DegenerateRamification(FsmapsError):
    exit_code = 3


class ParameterCollision(FsmapsError):
    exit_code = 3


class InsufficientLocalOrder(FsmapsError):
    pass


class OrderExhausted(FsmapsError):
    pass


class PoleAtExpansionPoint(FsmapsError):
    pass


class CapExceeded(FsmapsError):
    pass


class ConfigError(FsmapsError):
    pass
