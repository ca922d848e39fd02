"""Exception hierarchy shared by all modules."""


class IndepError(Exception):
    """Base class for library errors."""


class DomainError(IndepError, ValueError):
    """An argument refers to attributes or values outside its universe."""


class PreconditionError(IndepError, ValueError):
    """An operation was called outside its documented preconditions."""


class ResourceLimitError(IndepError, RuntimeError):
    """An enumeration would exceed the configured bound."""


class ConstructionError(IndepError, ValueError):
    """A proof-tree combination is impossible."""


class ParseError(IndepError, ValueError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DegenerateConstructionWarning(UserWarning):
    """A generator produced a degenerate function set (empty or singleton)."""
