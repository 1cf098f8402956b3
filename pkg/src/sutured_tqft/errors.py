"""Exception types shared across the package."""
from __future__ import annotations

__all__ = [
    "ValidationError",
    "InvalidSurfaceError",
    "InvalidDividingSetError",
    "InvalidGluingError",
    "InvalidChordDiagramError",
    "UnsupportedSurfaceError",
    "InternalConsistencyError",
]


class ValidationError(ValueError):
    """Input data fails a structural precondition."""


class InvalidSurfaceError(ValidationError):
    """Halfedge complex or its sutured marking is malformed."""


class InvalidDividingSetError(ValidationError):
    """Curve system or sign assignment violates the dividing-set axioms."""


class InvalidGluingError(ValidationError):
    """Boundary identification data is not a valid gluing."""


class InvalidChordDiagramError(ValidationError):
    """Matching data is not a noncrossing chord diagram."""


class UnsupportedSurfaceError(ValueError):
    """Input is valid but outside the range this algorithm supports."""


class InternalConsistencyError(AssertionError):
    """A theorem-backed internal invariant failed; indicates a bug."""
