"""Exception types shared across the package."""


class ChanleakError(Exception):
    """Base class for every error this package raises deliberately."""


class InvalidEntry(ChanleakError, ValueError):
    """A numeric input is negative, NaN, or otherwise outside its legal range."""


class NotStochastic(ChanleakError, ValueError):
    """A row or weight vector does not sum to one within tolerance."""


class ShapeError(ChanleakError, ValueError):
    """Operands have incompatible or malformed dimensions."""


class NumericalFailure(ChanleakError, ArithmeticError):
    """A computation produced NaN or an otherwise unusable intermediate."""


class DegenerateInput(ChanleakError, ValueError):
    """The input admits no well-defined answer (e.g. an all-zero weighting)."""


class BudgetExceeded(ChanleakError, RuntimeError):
    """An enumeration would exceed its configured size budget."""
