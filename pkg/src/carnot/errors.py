"""Exception types shared across the package."""
from __future__ import annotations


class CarnotError(Exception):
    """Base class for all errors raised by :mod:`carnot`."""


class IncompatibleOperandsError(CarnotError, ValueError):
    pass


class DomainError(CarnotError, ValueError):
    pass


class ParameterError(CarnotError, ValueError):
    pass


class NotNilpotentError(CarnotError):
    pass


class DependentVectorsError(CarnotError, ValueError):
    pass


class ClosureError(CarnotError):
    """The span is not closed under the bracket; ``witness`` names the pair."""

    def __init__(self, message, witness=None, value=None):
        super().__init__(message)
        self.witness = witness
        self.value = value


class BudgetError(CarnotError):
    def __init__(self, message, cells=None, budget=None):
        super().__init__(message)
        self.cells = cells
        self.budget = budget


class NotApplicableError(CarnotError):
    pass


class LedgerGapError(CarnotError, KeyError):
    def __init__(self, message, missing=None):
        super().__init__(message)
        self.missing = missing

    def __str__(self):
        return self.args[0]


class HypothesisError(CarnotError):
    """A hypothesis of a bound failed; ``hypothesis`` names it."""

    def __init__(self, hypothesis, message, witness=None):
        super().__init__(f"{hypothesis}: {message}")
        self.hypothesis = hypothesis
        self.witness = witness


class NotCocycleError(HypothesisError):
    def __init__(self, message, differential=None):
        super().__init__("cocycle", message, witness=differential)
        self.differential = differential


class AlgebraFormatError(CarnotError, ValueError):
    """Malformed algebra or jet file.  ``line``/``column`` when known, else ``path``."""

    def __init__(self, message, line=None, column=None, path=None):
        where = []
        if line is not None:
            where.append(f"line {line}, column {column}")
        if path:
            where.append(f"at {path}")
        super().__init__(message + (f" ({'; '.join(where)})" if where else ""))
        self.line = line
        self.column = column
        self.path = path
