"""Exception types raised by the solvers."""


class TwThermoError(Exception):
    """Base class for all package errors."""


class ConvergenceError(TwThermoError):
    """An iteration stopped without reaching its tolerance."""

    def __init__(self, message, residual=None, history=None):
        super().__init__(message)
        self.residual = residual
        self.history = list(history) if history is not None else []


class SingularJacobianError(TwThermoError):
    """Newton step could not be computed."""


class ExtentTooSmallError(TwThermoError, ValueError):
    """A line function has not decayed at the grid ends."""


class PoleCollisionError(TwThermoError, ValueError):
    """A Cauchy kernel pole sits on a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class BranchCutError(TwThermoError, ArithmeticError):
    """A logarithm argument came too close to the negative real axis."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class DimensionError(TwThermoError, ValueError):
    """Requested dense problem is too large."""
