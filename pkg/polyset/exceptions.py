"""Exception hierarchy. LP statuses and missing minimizers are values, not errors."""

from __future__ import annotations


class PolysetError(RuntimeError):
    """Base class for all polyset errors."""


class InconsistentSystemError(PolysetError):
    """Raised when a linear equation system has no solution."""


class EmptySetError(PolysetError):
    """Raised when an operation requires a nonempty polyhedron."""


class DimensionMismatchError(PolysetError, ValueError):
    """Raised when vector, matrix or problem dimensions do not fit together."""


class NotInUpperImageError(PolysetError):
    """Raised when a minimizer is requested for a point outside the upper image."""


class NotInDomainError(PolysetError):
    """Raised when a point outside dom F is used where a value F(x) is required."""


class InvalidBidAskMatrixError(PolysetError, ValueError):
    """Raised for bid-ask matrices that violate the standard conditions."""

    def __init__(self, message: str, condition: str | None = None) -> None:
        super().__init__(message)
        self.condition = condition


class ProblemParseError(PolysetError):
    """Raised for malformed problem files; carries the 1-based position."""

    def __init__(self, message: str, line: int, column: int = 1) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class UnsupportedDimensionError(PolysetError):
    """Raised when plot data is requested for an image dimension other than 2 or 3."""


class CertificateError(PolysetError):
    """Raised in checking mode when an LP outcome fails certificate verification."""


class IterationLimitError(PolysetError):
    """Raised when a minimizer loop exceeds Settings.max_minimizer_iterations."""
