"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    pass


class ResourceLimit(RuntimeError):
    """A configured size or iteration budget would be exceeded."""


class BudgetExceeded(ResourceLimit):
    pass


class UnsupportedPrime(ValueError):
    pass


class InternalInconsistency(RuntimeError):
    """A property that holds by construction failed; points at a bug upstream."""
