"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of an operation."""


class CapError(RuntimeError):
    """A request exceeds a hard resource cap and is refused outright."""


class EmptyConditionError(DomainError):
    """A conditional probability was requested against an event of count zero."""
