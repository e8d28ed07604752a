"""Exception types shared by the toolkit."""


class ArithmeticOverflow(OverflowError):
    """An exact-arithmetic result left the signed 64-bit range."""


class DomainError(ValueError):
    """An argument is outside the domain of the operation."""


class ResourceLimitError(MemoryError):
    """A requested enumeration would exceed the configured memory budget."""

    def __init__(self, message, progress=None):
        super().__init__(message)
        self.progress = progress


class InvariantViolation(RuntimeError):
    """An internal invariant that should be unreachable was broken."""


class CheckFailure(AssertionError):
    """A verified mathematical claim did not hold."""


class IdentityFailure(CheckFailure):
    pass


class FamilyIdentityError(CheckFailure):
    pass


class TheoremCheckError(CheckFailure):
    pass


class LemmaViolation(CheckFailure):
    pass


class ReciprocityViolation(CheckFailure):
    pass


class CalibrationError(CheckFailure):
    pass


class GeometryError(RuntimeError):
    """A traced point left the surface."""


class CacheFormatError(ValueError):
    """A census cache file is truncated, corrupt or of another version."""
