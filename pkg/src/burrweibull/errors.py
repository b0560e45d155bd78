"""Exception hierarchy shared across the package."""


class BwError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(BwError, ValueError):
    """An argument lies outside the domain of the requested function."""


class RangeError(BwError, ArithmeticError):
    """The result is not representable (e.g. division by an underflowed survival)."""


class ValidityError(DomainError):
    """A series expansion is used outside its window of validity."""


class ConvergenceError(BwError, RuntimeError):
    """An iterative solver or optimizer failed to converge.

    ``best`` carries the best point found so far, when there is one.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class IntegrationError(BwError, RuntimeError):
    """Numerical quadrature did not reach the requested accuracy."""


class ParseError(BwError, ValueError):
    """Malformed input text; carries the 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
        self.line = line
        self.column = column


class ReportError(BwError, RuntimeError):
    """A simulation cell had too many failed replicates to be reported."""
