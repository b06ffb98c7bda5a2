"""Exception types shared across the package."""


class McclinkError(Exception):
    """Base class for all package errors."""


class InputError(McclinkError):
    """Malformed or inconsistent user input (files, ids, parameters)."""


class ConvergenceError(McclinkError):
    """An iterative solver exhausted its iteration budget.

    Carries the number of iterations performed in ``iterations``.
    """

    def __init__(self, message: str, iterations: int):
        super().__init__(message)
        self.iterations = iterations


class InvariantError(McclinkError):
    """An internal consistency check failed."""
