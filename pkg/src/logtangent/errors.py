"""Exception hierarchy shared by every module."""


class LogTangentError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LogTangentError, ValueError):
    """An argument lies outside the domain where an operation is defined."""


class PoleError(DomainError):
    """A function was evaluated at one of its poles."""


class ToleranceError(LogTangentError, ValueError):
    """The requested tolerance is tighter than the method can honestly deliver."""


class PrecisionError(LogTangentError, ArithmeticError):
    """Working precision is insufficient for the requested result."""


class CertificationError(LogTangentError, AssertionError):
    """An exact certificate failed; this signals a bug, not bad input."""
