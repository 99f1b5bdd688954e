"""Exception hierarchy shared by every module."""


class AnforgeError(Exception):
    """Base class for all errors raised by anforge."""


class DomainError(AnforgeError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedDomainError(DomainError):
    """The operation is only defined for a restricted class of inputs (e.g. q = 2)."""


class ResourceLimitError(AnforgeError, RuntimeError):
    """The configuration space or a search budget exceeds the configured limit."""
