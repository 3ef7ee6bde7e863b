"""Lie algebra tensor calculus: brackets, adjoint actions and Yang-Baxter obstructions.

Elements of g, g⊗g and g⊗g⊗g are stored by their coefficients in a fixed
matrix basis ``X_k``; structure constants ``c[i][j][k]`` satisfy
``[X_i, X_j] = Σ_k c[i][j][k] X_k``. The wedge convention is
``X∧Y := X⊗Y − Y⊗X``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from propcache import cached_property
from scipy import linalg

from . import LOGGER, VERBOSE
from .const import CLOSURE_TOLERANCE, DEFAULT_TOLERANCE, LSTSQ_CUTOFF
from .exceptions import (
    ClosureError,
    DimensionMismatchError,
    ElementLeavesAlgebraError,
    NotAntisymmetricError,
)


def _max_abs(array) -> float:
    array = np.asarray(array)
    return float(np.max(np.abs(array))) if array.size else 0.0


@dataclass(frozen=True, eq=False)
class LieAlgebraRep:
    """A matrix Lie algebra with explicit structure constants."""

    basis: np.ndarray
    """Array of shape ``(d, n, n)``."""
    structure_constants: np.ndarray
    """Array of shape ``(d, d, d)``."""

    @classmethod
    def from_basis(cls, basis, tolerance: float = CLOSURE_TOLERANCE) -> LieAlgebraRep:
        """Compute the structure constants of ``basis`` and validate them."""
        basis = np.asarray(basis, dtype=complex)
        if basis.ndim != 3 or basis.shape[1] != basis.shape[2]:
            raise DimensionMismatchError("(d, n, n)", basis.shape)
        dim, n = basis.shape[0], basis.shape[1]
        commutators = (
            np.einsum("aij,bjk->abik", basis, basis)
            - np.einsum("bij,ajk->abik", basis, basis)
        ).reshape(dim * dim, n * n)
        flat = basis.reshape(dim, n * n).T
        coeffs, *_ = linalg.lstsq(flat, commutators.T, cond=LSTSQ_CUTOFF)
        constants = coeffs.T.reshape(dim, dim, dim)
        return cls(basis, constants).validated(tolerance)

    def validated(self, tolerance: float = CLOSURE_TOLERANCE) -> LieAlgebraRep:
        """Check closure, antisymmetry and the Jacobi identity; return ``self``."""
        basis, c = self.basis, self.structure_constants
        if c.shape != (self.dim,) * 3:
            raise DimensionMismatchError((self.dim,) * 3, c.shape)
        if np.linalg.matrix_rank(self.flat_basis, tol=LSTSQ_CUTOFF) < self.dim:
            raise ClosureError("basis matrices are linearly dependent")
        commutators = np.einsum("aij,bjk->abik", basis, basis) - np.einsum(
            "bij,ajk->abik", basis, basis
        )
        closure = _max_abs(commutators - np.einsum("abk,kij->abij", c, basis))
        if closure > tolerance:
            raise ClosureError(f"basis is not closed under commutators ({closure:.3g})")
        antisymmetry = _max_abs(c + c.transpose(1, 0, 2))
        if antisymmetry > tolerance:
            raise ClosureError(f"structure constants not antisymmetric ({antisymmetry:.3g})")
        jacobi = _max_abs(
            np.einsum("ijm,mkl->ijkl", c, c)
            + np.einsum("jkm,mil->ijkl", c, c)
            + np.einsum("kim,mjl->ijkl", c, c)
        )
        if jacobi > tolerance:
            raise ClosureError(f"structure constants violate Jacobi ({jacobi:.3g})")
        LOGGER.debug("Validated Lie algebra dim=%d n=%d", self.dim, self.n)
        return self

    @property
    def dim(self) -> int:
        """Dimension d of the algebra."""
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        """Size of the representing matrices."""
        return self.basis.shape[1]

    @cached_property
    def flat_basis(self) -> np.ndarray:
        """Row-major flattened basis as the columns of an ``(n², d)`` matrix."""
        return self.basis.reshape(self.dim, -1).T

    @cached_property
    def flat_basis2(self) -> np.ndarray:
        """Flattened ``X_k⊗X_l`` as the columns of an ``(n⁴, d²)`` matrix."""
        kron = np.einsum("kab,lcd->klacbd", self.basis, self.basis)
        return kron.reshape(self.dim * self.dim, -1).T

    def element(self, coeffs) -> np.ndarray:
        """The matrix ``Σ x^k X_k``."""
        return np.tensordot(self._vector(coeffs), self.basis, axes=1)

    def expand(self, matrix, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
        """Coefficients of ``matrix`` in the basis."""
        return _expand(self.flat_basis, np.asarray(matrix).reshape(-1), tolerance)

    def expand2(self, matrix, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
        """Coefficients of an ``n²×n²`` matrix in the basis ``X_k⊗X_l``."""
        coeffs = _expand(self.flat_basis2, np.asarray(matrix).reshape(-1), tolerance)
        return coeffs.reshape(self.dim, self.dim)

    def adjoint_matrix(self, g, tolerance: float = DEFAULT_TOLERANCE) -> np.ndarray:
        """Matrix ``A`` of Ad_g in the basis: ``g X_k g⁻¹ = Σ_j A[j, k] X_j``."""
        g = np.asarray(g)
        conjugated = g @ self.basis @ np.linalg.inv(g)
        flat = conjugated.reshape(self.dim, -1).T
        return _expand(self.flat_basis, flat, tolerance)

    def _vector(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.dim,):
            raise DimensionMismatchError(self.dim, x.shape)
        return x


def _expand(flat_basis: np.ndarray, target: np.ndarray, tolerance: float) -> np.ndarray:
    coeffs, *_ = linalg.lstsq(flat_basis, target, cond=LSTSQ_CUTOFF)
    residual = _max_abs(flat_basis @ coeffs - target)
    if residual > tolerance:
        raise ElementLeavesAlgebraError(residual)
    return coeffs


@dataclass(frozen=True, eq=False)
class CoefTensor2:
    """An element ``Σ t^{kl} X_k⊗X_l`` of g⊗g."""

    __array_ufunc__ = None

    algebra: LieAlgebraRep
    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        shape = (self.algebra.dim,) * 2
        if coeffs.shape != shape:
            raise DimensionMismatchError(shape, coeffs.shape)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, algebra: LieAlgebraRep) -> CoefTensor2:
        """The zero tensor."""
        return cls(algebra, np.zeros((algebra.dim,) * 2))

    @classmethod
    def tensor(cls, algebra: LieAlgebraRep, x, y) -> CoefTensor2:
        """``x⊗y`` for coefficient vectors x, y."""
        return cls(algebra, np.outer(algebra._vector(x), algebra._vector(y)))

    @classmethod
    def wedge(cls, algebra: LieAlgebraRep, x, y) -> CoefTensor2:
        """``x∧y = x⊗y − y⊗x``."""
        return cls.tensor(algebra, x, y) - cls.tensor(algebra, y, x)

    @cached_property
    def matrix(self) -> np.ndarray:
        """The ``n²×n²`` matrix ``Σ t^{kl} X_k⊗X_l``."""
        n = self.algebra.n
        basis = self.algebra.basis
        return np.einsum("kl,kab,lcd->acbd", self.coeffs, basis, basis).reshape(n * n, n * n)

    @property
    def transposed(self) -> CoefTensor2:
        """The flipped tensor ``t_21``."""
        return CoefTensor2(self.algebra, self.coeffs.T)

    def antisymmetry_residual(self) -> float:
        """Max-norm of ``t + t_21``."""
        return _max_abs(self.coeffs + self.coeffs.T)

    def require_antisymmetric(self, tolerance: float = DEFAULT_TOLERANCE) -> CoefTensor2:
        """Return ``self`` or raise `NotAntisymmetricError`."""
        if (residual := self.antisymmetry_residual()) > tolerance:
            raise NotAntisymmetricError(residual)
        return self

    def max_abs(self) -> float:
        """Largest coefficient magnitude."""
        return _max_abs(self.coeffs)

    def __add__(self, other: CoefTensor2) -> CoefTensor2:
        return CoefTensor2(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: CoefTensor2) -> CoefTensor2:
        return CoefTensor2(self.algebra, self.coeffs - other.coeffs)

    def __neg__(self) -> CoefTensor2:
        return CoefTensor2(self.algebra, -self.coeffs)

    def __mul__(self, scalar: complex) -> CoefTensor2:
        return CoefTensor2(self.algebra, scalar * self.coeffs)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return f"{__class__.__name__}({self.coeffs!r})"


@dataclass(frozen=True, eq=False)
class CoefTensor3:
    """An element of g⊗g⊗g by its ``d×d×d`` coefficients."""

    __array_ufunc__ = None

    algebra: LieAlgebraRep
    coeffs: np.ndarray

    @cached_property
    def matrix(self) -> np.ndarray:
        """The ``n³×n³`` matrix ``Σ T^{abc} X_a⊗X_b⊗X_c``."""
        n = self.algebra.n
        basis = self.algebra.basis
        full = np.einsum("abc,aij,bkl,cmn->ikmjln", self.coeffs, basis, basis, basis)
        return full.reshape(n**3, n**3)

    def max_abs(self) -> float:
        """Largest coefficient magnitude."""
        return _max_abs(self.coeffs)

    def is_zero(self, tolerance: float = DEFAULT_TOLERANCE) -> bool:
        """``True`` if every coefficient is below tolerance."""
        return self.max_abs() <= tolerance

    def __add__(self, other: CoefTensor3) -> CoefTensor3:
        return CoefTensor3(self.algebra, self.coeffs + other.coeffs)

    def __sub__(self, other: CoefTensor3) -> CoefTensor3:
        return CoefTensor3(self.algebra, self.coeffs - other.coeffs)

    def __mul__(self, scalar: complex) -> CoefTensor3:
        return CoefTensor3(self.algebra, scalar * self.coeffs)

    __rmul__ = __mul__


class QuasitriangularSense(Enum):
    """Reality of the symmetric part of a Yang-Baxter solution."""

    REAL = "real"
    IMAGINARY = "imaginary"
    MIXED = "mixed"


def bracket(alg: LieAlgebraRep, x, y) -> np.ndarray:
    """Coefficients of ``[x, y]``."""
    return np.einsum("i,j,ijk->k", alg._vector(x), alg._vector(y), alg.structure_constants)


def split_sym_anti(t: CoefTensor2) -> tuple[CoefTensor2, CoefTensor2]:
    """Split ``t`` into its symmetric and antisymmetric parts."""
    sym = 0.5 * (t.coeffs + t.coeffs.T)
    anti = 0.5 * (t.coeffs - t.coeffs.T)
    return CoefTensor2(t.algebra, sym), CoefTensor2(t.algebra, anti)


def adjoint_action2(alg: LieAlgebraRep, g, t: CoefTensor2) -> CoefTensor2:
    """Apply ``Ad_g⊗Ad_g`` to ``t``.

    ``g`` is a matrix or anything with a ``matrix`` attribute. Raises
    `ElementLeavesAlgebraError` when ``g X_k g⁻¹`` leaves the span of the basis.
    """
    adj = alg.adjoint_matrix(getattr(g, "matrix", g))
    return CoefTensor2(alg, adj @ t.coeffs @ adj.T)


def adjoint_action3(alg: LieAlgebraRep, g, t: CoefTensor3) -> CoefTensor3:
    """Apply ``Ad_g⊗Ad_g⊗Ad_g`` to ``t``."""
    adj = alg.adjoint_matrix(getattr(g, "matrix", g))
    return CoefTensor3(alg, np.einsum("ai,bj,ck,ijk->abc", adj, adj, adj, t.coeffs))


def ad_invariance_residual(alg: LieAlgebraRep, t: CoefTensor2) -> float:
    """Max over basis elements of ``‖[X_m⊗1 + 1⊗X_m, M(t)]‖_max``."""
    eye = np.eye(alg.n)
    matrix = t.matrix
    residual = 0.0
    for x in alg.basis:
        diagonal = np.kron(x, eye) + np.kron(eye, x)
        residual = max(residual, _max_abs(diagonal @ matrix - matrix @ diagonal))
    return residual


def _bracket_12_13(alg: LieAlgebraRep, x: CoefTensor2, y: CoefTensor2) -> np.ndarray:
    return np.einsum("ib,kc,ika->abc", x.coeffs, y.coeffs, alg.structure_constants)


def _bracket_12_23(alg: LieAlgebraRep, x: CoefTensor2, y: CoefTensor2) -> np.ndarray:
    return np.einsum("ai,kc,ikb->abc", x.coeffs, y.coeffs, alg.structure_constants)


def _bracket_13_23(alg: LieAlgebraRep, x: CoefTensor2, y: CoefTensor2) -> np.ndarray:
    return np.einsum("ai,bk,ikc->abc", x.coeffs, y.coeffs, alg.structure_constants)


def cybe(alg: LieAlgebraRep, w: CoefTensor2) -> CoefTensor3:
    """``[w12, w13] + [w12, w23] + [w13, w23]``."""
    coeffs = (
        _bracket_12_13(alg, w, w) + _bracket_12_23(alg, w, w) + _bracket_13_23(alg, w, w)
    )
    LOGGER.log(VERBOSE, "cybe coefficients: %s", coeffs)
    return CoefTensor3(alg, coeffs)


def mixed_obstructions(
    alg: LieAlgebraRep,
    r: CoefTensor2,
    w: CoefTensor2,
    tolerance: float = DEFAULT_TOLERANCE,
) -> tuple[CoefTensor3, CoefTensor3]:
    """The two Jacobi obstructions of a two-link structure with constant ``φ = −w``.

    ``T1 = [r12, w13] + [r12, w23] + [w13, w23]`` and
    ``T2 = [w12, w13] + [w12, r23] + [w13, r23]``.
    """
    r.require_antisymmetric(tolerance)
    first = _bracket_12_13(alg, r, w) + _bracket_12_23(alg, r, w) + _bracket_13_23(alg, w, w)
    second = _bracket_12_13(alg, w, w) + _bracket_12_23(alg, w, r) + _bracket_13_23(alg, w, r)
    return CoefTensor3(alg, first), CoefTensor3(alg, second)


def quasitriangular_sense(
    w: CoefTensor2, tolerance: float = DEFAULT_TOLERANCE
) -> QuasitriangularSense:
    """Classify the symmetric part of ``w`` as real, imaginary or mixed.

    Coefficients are read in the algebra's own basis, which must agree with a
    basis of the real form up to one common real or imaginary factor.
    """
    sym, _ = split_sym_anti(w)
    if _max_abs(sym.coeffs.imag) <= tolerance:
        return QuasitriangularSense.REAL
    if _max_abs(sym.coeffs.real) <= tolerance:
        return QuasitriangularSense.IMAGINARY
    return QuasitriangularSense.MIXED
