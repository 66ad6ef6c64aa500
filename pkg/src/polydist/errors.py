"""Exception hierarchy shared by every module."""


class PolydistError(Exception):
    """Base class for all errors raised by polydist."""


class PreconditionError(PolydistError, ValueError):
    """An input violates a documented precondition."""


class NumericalFailure(PolydistError, ArithmeticError):
    """A dense decomposition failed to converge."""


class InfeasibleConstruction(PolydistError):
    """The perturbation construction is not defined for this input.

    ``hypothesis`` names the violated condition, e.g. ``"rank(V(gamma)) = k"``.
    """

    def __init__(self, message, hypothesis):
        super().__init__(message)
        self.hypothesis = hypothesis


class ProblemFormatError(PolydistError, ValueError):
    """A problem document could not be parsed; ``where`` addresses the field or line."""

    def __init__(self, message, where=None):
        super().__init__(f"{where}: {message}" if where else message)
        self.where = where
