"""Exception hierarchy shared by every flagmajor module."""

from typing import Dict, Optional


class FlagMajorError(Exception):
    """Base class for all errors raised by flagmajor."""


class DimensionError(FlagMajorError, ValueError):
    """Raised when elements of different G(r, n) are mixed."""


class ElementFormatError(FlagMajorError, ValueError):
    """Raised for malformed element text, bad colors or non-bijective windows."""


class GroupSizeError(FlagMajorError, ValueError):
    """Raised when a group or product set would exceed the enumeration ceiling.

    Attributes:
        ceiling: The ceiling that was exceeded.
        size: The size that was requested.
    """

    def __init__(self, size: int, ceiling: int) -> None:
        super().__init__(f"{size} elements exceed the ceiling of {ceiling}")
        self.size: int = size
        self.ceiling: int = ceiling


class UnsupportedParameters(FlagMajorError, ValueError):
    """Raised when construction parameters violate a precondition."""


class NotInGroupError(FlagMajorError, ValueError):
    """Raised when an element does not belong to the group of a basis."""


class PeelUnsupportedError(FlagMajorError, ValueError):
    """Raised when peel decomposition is requested for an unsupported basis."""


class UnreachedElementsError(FlagMajorError, ValueError):
    """Raised when a generating set does not reach every group element.

    Attributes:
        witness: Text form of one element that was not reached.
        unreached: How many elements were not reached.
    """

    def __init__(self, witness: str, unreached: int) -> None:
        super().__init__(
            f"generators miss {unreached} element(s), for example {witness}"
        )
        self.witness: str = witness
        self.unreached: int = unreached


class ConsistencyError(FlagMajorError, RuntimeError):
    """Raised when two independent computations disagree.

    Attributes:
        details: Optional key/value context for the report.
    """

    def __init__(self, message: str, details: Optional[Dict[str, str]] = None) -> None:
        super().__init__(message)
        self.details: Dict[str, str] = details or {}
