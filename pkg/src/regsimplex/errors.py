"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes): bad input
(``InputError``, exit 2) and numerical failures on otherwise well-formed
input (``NumericalError``, exit 3).
"""

from __future__ import annotations


class RegSimplexError(Exception):
    """Base class for all errors raised by this package."""


class InputError(RegSimplexError, ValueError):
    """Input that violates an operation's preconditions."""


class NumericalError(RegSimplexError, ArithmeticError):
    """A well-formed input that fails a numerical check."""


class DimensionError(InputError):
    pass


class DegenerateSimplexError(InputError):
    pass


class InfeasibleConstructionError(InputError):
    pass


class ExtrapolationError(InputError):
    pass


class RegularityError(NumericalError):
    """Vertices do not form a regular simplex within tolerance."""

    def __init__(self, message: str, spread: float):
        super().__init__(message)
        self.spread = spread


class SingularSystemError(NumericalError):
    pass


class EvaluationError(NumericalError):
    """The user-supplied function failed at a vertex."""

    def __init__(self, message: str, index: int):
        super().__init__(message)
        self.index = index
