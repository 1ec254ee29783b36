"""Exception types shared across the package."""


class TridendError(Exception):
    """Base class for all errors raised by tridend."""


class ArityError(TridendError, ValueError):
    """A vertex was given fewer than two children."""


class TreeParseError(TridendError, ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DomainError(TridendError, ValueError):
    """An argument lies outside the domain of the operation."""


class UndefinedOperationError(TridendError, ArithmeticError):
    """Raised for the unit-on-both-sides products 1<1, 1>1 and 1.1."""


class HorizonError(TridendError, IndexError):
    """A sequence was evaluated beyond its stored prefix."""


class DimensionError(TridendError, ValueError):
    pass


class UnresolvedConventionError(TridendError, RuntimeError):
    """A convention-dependent formula was asked to run without a frozen ledger."""
