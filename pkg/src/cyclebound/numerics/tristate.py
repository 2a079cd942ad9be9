"""Three-valued result of a conservative interval comparison."""

from enum import Enum


class TriState(Enum):
    """Outcome of a decision made on enclosures.

    ``UNKNOWN`` means the enclosures overlap and the question cannot be
    settled at the current precision. It is never rounded to ``TRUE``.
    """
    TRUE = "true"
    FALSE = "false"
    UNKNOWN = "unknown"

    @classmethod
    def from_bool(cls, value: bool) -> "TriState":
        """Lift an exact boolean."""
        return cls.TRUE if value else cls.FALSE

    def negate(self) -> "TriState":
        """Logical negation; ``UNKNOWN`` stays ``UNKNOWN``."""
        if self is TriState.TRUE:
            return TriState.FALSE
        if self is TriState.FALSE:
            return TriState.TRUE
        return TriState.UNKNOWN

    def __bool__(self) -> bool:
        raise TypeError(
            "TriState has no truth value; compare against TriState.TRUE"
        )
