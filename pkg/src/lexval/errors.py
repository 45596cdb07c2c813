"""Exception hierarchy shared by every module."""


class LexvalError(Exception):
    """Base class for domain errors (bad input, invalid values, failed checks)."""


class ScaleError(LexvalError, ValueError):
    """Invalid scale declaration or negation table."""


class ScaleMismatchError(LexvalError, TypeError):
    """Ordered operation attempted across two different scales."""


class ValuationError(LexvalError, ValueError):
    """Malformed grade string or valuation."""


class LengthCapError(ValuationError):
    """A valuation grew beyond the configured maximum length."""


class SearchBoundError(LexvalError, ArithmeticError):
    """A bounded supremum search could not confirm that the supremum is attained."""


class BudgetError(LexvalError):
    """Enumeration budget or cost ceiling exceeded."""


class InferenceError(LexvalError):
    """Forward chaining failed; ``chain`` holds the offending derivation."""

    def __init__(self, message, chain=()):
        super().__init__(message)
        self.chain = tuple(chain)
