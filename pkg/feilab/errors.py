class FeiError(Exception):
    """Base class for every error raised by feilab."""

    def __init__(self, message: str):
        self.message: str = message
        super().__init__(message)


class DomainError(FeiError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(FeiError):
    """The requested arity or population exceeds a configured limit."""


class NotBooleanError(FeiError, ValueError):
    """A spectrum does not reconstruct to a +1/-1 valued function."""


class InvalidSpectrumError(FeiError, ValueError):
    """A spectrum violates Parseval or has the wrong length."""
