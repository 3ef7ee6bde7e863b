"""Gauge check errors."""

from __future__ import annotations


class InputError(ValueError):
    """The caller supplied malformed input."""


class DimensionMismatchError(InputError):
    """Operands do not have matching dimensions."""

    def __init__(self, expected, actual) -> None:  # noqa: D107
        self.expected = expected
        self.actual = actual
        super().__init__(f"expected dimension {expected}, got {actual}")


class NotAntisymmetricError(InputError):
    """An r-matrix was required to be antisymmetric."""

    def __init__(self, residual: float) -> None:  # noqa: D107
        self.residual = residual
        super().__init__(f"tensor is not antisymmetric (residual {residual:.3g})")


class ConventionError(InputError):
    """An R-matrix is in the wrong (plain/hat) convention."""


class DegreeOverflowError(InputError):
    """A polynomial exceeds the supported degree."""

    def __init__(self, degree: int, max_degree: int) -> None:  # noqa: D107
        self.degree = degree
        self.max_degree = max_degree
        super().__init__(f"degree {degree} exceeds maximum {max_degree}")


class DocumentError(InputError):
    """A JSON document did not contain the expected fields."""

    def __init__(self, message: str, document: dict | None = None) -> None:  # noqa: D107
        super().__init__(message)
        self.document = document


class ClosureError(Exception):
    """A matrix basis does not define a Lie algebra."""


class ElementLeavesAlgebraError(Exception):
    """A matrix could not be re-expanded in the algebra basis."""

    def __init__(self, residual: float) -> None:  # noqa: D107
        self.residual = residual
        super().__init__(f"element leaves algebra (residual {residual:.3g})")


class SingularMatrixError(Exception):
    """A matrix required to be invertible is singular."""

    def __init__(self, determinant: complex) -> None:  # noqa: D107
        self.determinant = determinant
        super().__init__(f"singular matrix (det {abs(determinant):.3g})")
