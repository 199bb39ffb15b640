"""Exception types shared across the package."""


class DimensionError(ValueError):
    """A vector or morphism had the wrong dimension."""

    def __init__(self, message, expected=None, actual=None):
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class NonFiniteError(ArithmeticError):
    """A computation produced NaN or infinity."""


class DomainError(ValueError):
    """An error model was evaluated outside the set where it is defined.

    ``index`` is the offending coordinate (0-based) when known.
    """

    def __init__(self, message, index=None, value=None):
        super().__init__(message)
        self.index = index
        self.value = value
