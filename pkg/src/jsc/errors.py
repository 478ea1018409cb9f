"""Exception hierarchy shared by every module.

Each class carries the CLI exit code it maps to, so the command-line layer
never needs its own lookup table.
"""


class JscError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DomainError(JscError, ValueError):
    """An operation's precondition does not hold for the given input."""

    exit_code = 2


class ValidationError(JscError, ValueError):
    """Malformed matrix, matrix set, cone or parameter."""

    exit_code = 2


class ParseError(ValidationError):
    """Input file could not be parsed.

    ``line`` is the 1-based line number of the offending line when known.
    """

    def __init__(self, msg, line=None):
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)
        self.line = line


class ResourceError(JscError):
    """Enumeration budget exhausted."""

    exit_code = 3


class SizeError(ResourceError):
    """A Kronecker lift would exceed the configured dimension cap."""


class NumericalError(JscError, ArithmeticError):
    """An iterative method failed to converge.

    ``diagnostics`` holds whatever partial state helps explain the failure.
    """

    exit_code = 4

    def __init__(self, msg, diagnostics=None):
        super().__init__(msg)
        self.diagnostics = diagnostics or {}


class SamplingError(NumericalError):
    """A Monte-Carlo estimator produced no usable samples."""
