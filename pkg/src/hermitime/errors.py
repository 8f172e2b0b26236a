"""Exception hierarchy shared by all modules."""


class HermitimeError(Exception):
    """Base class for every error raised by this package."""


class DomainError(HermitimeError, ValueError):
    """A parameter lies outside the domain an operation accepts."""


class MismatchError(HermitimeError, ValueError):
    """Operands live on different grids, spaces, or boundary conventions."""


class ZeroNormError(DomainError):
    pass


class InsufficientDomainError(DomainError):
    """The grid is too narrow for the requested eigenfunction to decay."""


class ConfigError(HermitimeError):
    """Malformed or invalid experiment configuration."""

    def __init__(self, message, line=None, key=None):
        self.line = line
        self.key = key
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
