"""Exception types shared across the package."""


class SimSimError(Exception):
    pass


class ShapeMismatch(SimSimError, ValueError):
    pass


class SingularMatrix(SimSimError, ArithmeticError):
    pass


class NotCommuting(SimSimError):
    """Raised when two matrices of a would-be commuting tuple fail to commute."""

    def __init__(self, i, j):
        super().__init__(f"matrices {i} and {j} do not commute")
        self.i = i
        self.j = j


class PreconditionFailed(SimSimError):
    """A synthesis precondition does not hold.

    ``witness`` carries the separating polynomial tuple when the failure is
    an annihilator mismatch, otherwise it is None.
    """

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
