"""Built-in reference instances."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field

import numpy as np

from . import LOGGER
from .exceptions import InputError
from .lie_tensor import CoefTensor2, LieAlgebraRep
from .rmatrix import Convention, RMat, RMatFamily

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
X_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)
X_MINUS = np.array([[0, 0], [1, 0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class CatalogEntry:
    """A named algebra with reference tensors and an optional R-matrix family."""

    name: str
    algebra: LieAlgebraRep
    tensors: Mapping[str, CoefTensor2]
    primary: str
    """Name of the tensor checks use when none is chosen."""
    elements: Mapping[str, np.ndarray] = field(default_factory=dict)
    rmatrix_family: RMatFamily | None = None

    def tensor(self, name: str | None = None) -> CoefTensor2:
        """The named tensor, or the primary one."""
        name = name or self.primary
        if name not in self.tensors:
            raise InputError(
                f"{self.name} has no tensor {name!r}; choose from {', '.join(self.tensors)}"
            )
        return self.tensors[name]

    def rmatrix(self, q: complex) -> RMat:
        """The family member at ``q``."""
        if self.rmatrix_family is None:
            raise InputError(f"{self.name} has no R-matrix family")
        return self.rmatrix_family(q)


def _unit(size: int, i: int, j: int) -> np.ndarray:
    unit = np.zeros((size, size), dtype=complex)
    unit[i, j] = 1.0
    return unit


def pauli_su2() -> CatalogEntry:
    """su(2) in the Pauli basis with ``r = ½σ₁∧σ₂``, ``s = ½Σσ_j⊗σ_j`` and ``w = r − is``."""
    algebra = LieAlgebraRep.from_basis([SIGMA_1, SIGMA_2, SIGMA_3])
    r = 0.5 * CoefTensor2.wedge(algebra, [1, 0, 0], [0, 1, 0])
    s = CoefTensor2(algebra, 0.5 * np.eye(3))
    return CatalogEntry(
        name="su2-standard",
        algebra=algebra,
        tensors={"r": r, "s": s, "w": r - 1j * s},
        primary="w",
        elements={"X+": X_PLUS, "X-": X_MINUS},
        rmatrix_family=standard_r_su2,
    )


def sl2_real() -> CatalogEntry:
    """sl(2, ℝ) with the Drinfeld-Jimbo solution ``w_DJ = E⊗F + ¼H⊗H`` split as ``r_a + s_real``."""
    algebra = LieAlgebraRep.from_basis(
        [np.diag([1.0, -1.0]).astype(complex), X_PLUS, X_MINUS]
    )
    h, e, f = np.eye(3)
    w_dj = CoefTensor2.tensor(algebra, e, f) + 0.25 * CoefTensor2.tensor(algebra, h, h)
    r_a = 0.5 * CoefTensor2.wedge(algebra, e, f)
    return CatalogEntry(
        name="sl2-real",
        algebra=algebra,
        tensors={"w_DJ": w_dj, "r_a": r_a, "s_real": w_dj - r_a},
        primary="w_DJ",
    )


def gell_mann() -> np.ndarray:
    """The eight Gell-Mann matrices."""
    basis = [
        _unit(3, 0, 1) + _unit(3, 1, 0),
        -1j * _unit(3, 0, 1) + 1j * _unit(3, 1, 0),
        _unit(3, 0, 0) - _unit(3, 1, 1),
        _unit(3, 0, 2) + _unit(3, 2, 0),
        -1j * _unit(3, 0, 2) + 1j * _unit(3, 2, 0),
        _unit(3, 1, 2) + _unit(3, 2, 1),
        -1j * _unit(3, 1, 2) + 1j * _unit(3, 2, 1),
        np.diag([1.0, 1.0, -2.0]).astype(complex) / np.sqrt(3.0),
    ]
    return np.array(basis)


def su3_standard() -> CatalogEntry:
    """su(3) in the Gell-Mann basis with the invariant ``½Σλ_a⊗λ_a``."""
    algebra = LieAlgebraRep.from_basis(gell_mann())
    return CatalogEntry(
        name="su3-standard",
        algebra=algebra,
        tensors={"s": CoefTensor2(algebra, 0.5 * np.eye(8))},
        primary="s",
        rmatrix_family=lambda q: standard_r_sun(q, 3),
    )


def standard_r_sun(q: complex, N: int) -> RMat:  # pylint: disable=invalid-name
    """The standard SU(N) R-matrix, N = 2 or 3, in the plain convention.

    ``q^{-1/2} (q Σ E_ii⊗E_ii + Σ_{i≠j} E_ii⊗E_jj + (q − q⁻¹) Σ_{i>j} E_ij⊗E_ji)``
    """
    if N not in (2, 3):
        raise InputError(f"standard R-matrix is available for N = 2, 3, got {N}")
    if q == 0:
        raise InputError("q must be nonzero")
    root = np.sqrt(complex(q))
    entries = np.zeros((N * N, N * N), dtype=complex)
    for i in range(N):
        for j in range(N):
            entries[i * N + j, i * N + j] = root if i == j else 1 / root
            if i > j:
                entries[i * N + j, j * N + i] = root - 1 / root**3
    return RMat(entries, Convention.PLAIN)


def standard_r_su2(q: complex) -> RMat:
    """The standard SU(2) R-matrix.

    Diagonal ``(q^{1/2}, q^{-1/2}, q^{-1/2}, q^{1/2})`` and ``q^{1/2} − q^{-3/2}``
    at row ``(2, 1)``, column ``(1, 2)``.
    """
    return standard_r_sun(q, 2)


def su2_semiclassical_reference() -> tuple[np.ndarray, CoefTensor2, CoefTensor2]:
    """``M = 2X₋⊗X₊ + ½σ₃⊗σ₃`` with the tensors ``r`` and ``s`` of `pauli_su2`.

    ``M`` is the first-order coefficient of the standard R-matrix at q = 1
    and equals ``i(r − is)`` as a tensor.
    """
    entry = pauli_su2()
    derivative = 2 * np.kron(X_MINUS, X_PLUS) + 0.5 * np.kron(SIGMA_3, SIGMA_3)
    return derivative, entry.tensors["r"], entry.tensors["s"]


CATALOG: dict[str, Callable[[], CatalogEntry]] = {
    "su2-standard": pauli_su2,
    "sl2-real": sl2_real,
    "su3-standard": su3_standard,
}


def catalog_entry(name: str) -> CatalogEntry:
    """Build the catalog entry called ``name``."""
    try:
        factory = CATALOG[name]
    except KeyError:
        raise InputError(
            f"unknown catalog entry {name!r}; choose from {', '.join(CATALOG)}"
        ) from None
    LOGGER.debug("Building catalog entry %s", name)
    return factory()
