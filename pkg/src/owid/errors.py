"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input lies outside the mathematical domain (e.g. an unphysical state)."""


class PreconditionError(ValueError):
    """A closed form was called outside the parameter region where it holds."""


class ConvergenceError(RuntimeError):
    """The measurement optimizer stopped before meeting its tolerance.

    ``best_value`` and ``best_direction`` carry the best point found.
    """

    def __init__(self, message, best_value=None, best_direction=None):
        super().__init__(message)
        self.best_value = best_value
        self.best_direction = best_direction
