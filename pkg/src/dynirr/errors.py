"""Exception types shared across the package."""


class DynirrError(Exception):
    """Base class for all errors raised by this package."""


class InvalidFieldError(DynirrError, ValueError):
    """Field construction rejected: even/composite characteristic, k < 1, or q too large."""


class ContextMismatchError(DynirrError, ValueError):
    """An operand is not a canonical element of the field it was used with."""


class DegeneratePolynomialError(DynirrError, ValueError):
    """A quadratic was requested with leading coefficient zero."""


class ProportionalPairError(DynirrError, ValueError):
    """Two polynomials are scalar multiples where a non-proportional pair is required."""


class ResourceBudgetError(DynirrError, RuntimeError):
    """A configured degree or operation budget would be exceeded."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
