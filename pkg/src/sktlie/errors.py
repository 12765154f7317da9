"""Exception hierarchy shared across the library."""


class SktError(Exception):
    """Base class for all library-specific errors."""


class InvalidInputError(SktError, ValueError):
    """Raised when operands are malformed (dimension/degree mismatch, bad J, ...)."""


class PreconditionError(SktError, ValueError):
    """Raised when a mathematical precondition of an operation fails."""


class NoSuchConnectionError(SktError):
    """Raised when a flat Hermitian connection of the requested shape cannot exist."""


class InternalInconsistencyError(SktError):
    """Raised when two code paths that must agree do not (convention bug guard)."""
