"""Exception hierarchy shared by all modules."""


class SeptreeError(Exception):
    """Base class for all errors raised by septree."""


class GraphParseError(SeptreeError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class SeparationError(SeptreeError, ValueError):
    """A pair of vertex sets is not a separation of the graph."""


class PreconditionError(SeptreeError, ValueError):
    """An operation was called on inputs outside its domain."""


class ResourceLimitError(SeptreeError):
    """A configured size or time guard was exceeded."""


class InvariantViolation(SeptreeError, AssertionError):
    """An internal postcondition failed; this indicates a bug."""
