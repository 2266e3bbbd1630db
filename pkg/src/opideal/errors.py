"""Exception types shared across the package."""


class InputError(ValueError):
    """An argument failed validation (shape, finiteness, ordering, schema)."""


class DomainError(RuntimeError):
    """An input lies outside the mathematical domain of an operation
    (singular block, indefinite operator, degenerate spectrum)."""
