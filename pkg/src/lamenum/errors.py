"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed term text; ``position`` is the offset of the offending token."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class ResourceLimitError(RuntimeError):
    """A requested computation exceeds the configured size limits."""


class PrecisionError(ArithmeticError):
    """A numeric result is inconsistent with the working precision."""


class UnsupportedFamilyError(ValueError):
    """The requested operation is not defined for this family."""


class SingularitySearchError(RuntimeError):
    """The bisection predicate did not bracket a singularity."""


class CorruptTableError(ValueError):
    """A cached count table failed validation on load."""
