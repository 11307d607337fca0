"""Exception types shared across the package."""


class DoctrinaError(Exception):
    """Base class for errors raised by this package."""


class FormulaSyntaxError(DoctrinaError, ValueError):
    """Malformed formula text; carries the offending character offset."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at offset {position})"
        super().__init__(message)


class FileFormatError(DoctrinaError, ValueError):
    """Malformed doctrine, valuation, assignment, or weights file."""


class UnsatisfiableError(DoctrinaError, ValueError):
    """The clause set admits no satisfying truth assignment."""


class CapacityError(DoctrinaError, RuntimeError):
    """A configured size budget (clause count, enumeration cap) was exceeded."""


class DomainMismatchError(DoctrinaError, ValueError):
    """A valuation or assignment does not cover the expected atoms."""


class PreconditionError(DoctrinaError, ValueError):
    """An operation was invoked outside its documented preconditions."""


class UnilateralModeError(PreconditionError):
    """Unilateral decisions were requested without a definite Horn doctrine."""
