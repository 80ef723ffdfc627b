"""Exception types raised by :mod:`erlangloss`."""


class DomainError(ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(ArithmeticError):
    """An iterative routine stopped before meeting its tolerance.

    ``bracket`` holds the last pair of iterates (or bracket endpoints) seen
    before giving up.
    """

    def __init__(self, message, bracket=None):
        super().__init__(message)
        self.bracket = bracket
