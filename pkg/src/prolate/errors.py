"""Exception hierarchy shared by all modules."""


class ProlateError(Exception):
    """Base class for errors raised by this package."""


class DomainError(ProlateError, ValueError):
    """An argument lies outside the domain where the quantity is defined."""


class ConfigurationError(ProlateError, ValueError):
    """An invalid combination of options (e.g. sinc basis with Sobolev penalty)."""


class AccuracyError(ProlateError):
    """A self-check detected that the requested accuracy was not reached."""


class NumericalError(ProlateError, ArithmeticError):
    """Non-convergence or factorization failure in a numerical kernel."""
