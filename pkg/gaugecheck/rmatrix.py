"""Finite-dimensional R-matrices: Yang-Baxter residuals, conventions and semiclassical limits.

Entry ``R^{ij}_{kl}`` sits at row ``i·N + j``, column ``k·N + l``. The braid
form is ``R̂ = PR`` with ``P`` the flip of ``V⊗V``.
"""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum

import numpy as np
from propcache import cached_property
from scipy import linalg

from . import LOGGER
from .const import (
    DEFAULT_TOLERANCE,
    DERIVATIVE_STEPS,
    SEMICLASSICAL_TOLERANCE,
    SINGULARITY_THRESHOLD,
)
from .exceptions import (
    ConventionError,
    DimensionMismatchError,
    DocumentError,
    InputError,
    SingularMatrixError,
)
from .lie_tensor import CoefTensor2, LieAlgebraRep, split_sym_anti


class Convention(Enum):
    """Whether a matrix is stored as ``R`` or as ``R̂ = PR``."""

    PLAIN = "plain"
    HAT = "hat"

    @classmethod
    def _missing_(cls, value):
        LOGGER.warning("Unexpected R-matrix convention: %s", value)
        raise DocumentError(f"unknown R-matrix convention {value!r}")


def flip(size: int) -> np.ndarray:
    """The flip ``P(e_i⊗e_j) = e_j⊗e_i`` on ``V⊗V`` with ``dim V = size``."""
    perm = np.zeros((size * size, size * size))
    for i in range(size):
        for j in range(size):
            perm[j * size + i, i * size + j] = 1.0
    return perm


def _max_abs(array) -> float:
    return float(np.max(np.abs(array), initial=0.0))


@dataclass(frozen=True, eq=False)
class RMat:
    """An ``N²×N²`` matrix in the plain or hat convention."""

    entries: np.ndarray
    convention: Convention = Convention.PLAIN

    def __post_init__(self):
        entries = np.asarray(self.entries, dtype=complex)
        size = int(round(np.sqrt(entries.shape[0]))) if entries.ndim == 2 else 0
        if entries.ndim != 2 or entries.shape != (size * size, size * size):
            raise DimensionMismatchError("(N², N²)", entries.shape)
        object.__setattr__(self, "entries", entries)
        object.__setattr__(self, "convention", Convention(self.convention))

    @classmethod
    def identity(cls, size: int, convention: Convention = Convention.PLAIN) -> RMat:
        """The identity on ``V⊗V``."""
        return cls(np.eye(size * size), convention)

    @property
    def N(self) -> int:  # pylint: disable=invalid-name
        """Dimension of the fundamental representation."""
        return int(round(np.sqrt(self.entries.shape[0])))

    @cached_property
    def flip(self) -> np.ndarray:
        """P on ``V⊗V``."""
        return flip(self.N)

    def require(self, convention: Convention) -> RMat:
        """Return ``self`` or raise `ConventionError`."""
        if self.convention is not convention:
            raise ConventionError(
                f"expected {convention.value} convention, got {self.convention.value}"
            )
        return self

    def to_hat(self) -> RMat:
        """The same R-matrix in the hat convention."""
        if self.convention is Convention.HAT:
            return self
        return RMat(self.flip @ self.entries, Convention.HAT)

    def to_plain(self) -> RMat:
        """The same R-matrix in the plain convention."""
        if self.convention is Convention.PLAIN:
            return self
        return RMat(self.flip @ self.entries, Convention.PLAIN)


@dataclass(frozen=True, eq=False)
class Conventions:
    """An R-matrix together with its derived forms."""

    r: np.ndarray
    rhat: np.ndarray
    rhat21: np.ndarray
    """``P R̂ P``."""
    flip: np.ndarray


def _legs(matrix: np.ndarray, size: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``M12``, ``M13``, ``M23`` on ``V⊗V⊗V``."""
    eye = np.eye(size)
    swap23 = np.kron(eye, flip(size))
    m12 = np.kron(matrix, eye)
    return m12, swap23 @ m12 @ swap23, np.kron(eye, matrix)


def qybe_residual(R: RMat) -> float:  # pylint: disable=invalid-name
    """``‖R12 R13 R23 − R23 R13 R12‖_max``."""
    R.require(Convention.PLAIN)
    r12, r13, r23 = _legs(R.entries, R.N)
    return _max_abs(r12 @ r13 @ r23 - r23 @ r13 @ r12)


def braid_residual(Rhat: RMat) -> float:  # pylint: disable=invalid-name
    """``‖R̂12 R̂23 R̂12 − R̂23 R̂12 R̂23‖_max``."""
    Rhat.require(Convention.HAT)
    h12, _, h23 = _legs(Rhat.entries, Rhat.N)
    return _max_abs(h12 @ h23 @ h12 - h23 @ h12 @ h23)


def conventions(R: RMat) -> Conventions:  # pylint: disable=invalid-name
    """``R``, ``R̂ = PR``, ``R̂₂₁ = PR̂P`` and ``P``."""
    perm = R.flip
    plain = R.to_plain().entries
    rhat = perm @ plain
    return Conventions(r=plain, rhat=rhat, rhat21=perm @ rhat @ perm, flip=perm)


def drinfeld_rd(R: RMat, tolerance: float = DEFAULT_TOLERANCE) -> RMat:  # pylint: disable=invalid-name
    """``R_D := R⁻¹``, which is again a Yang-Baxter solution when ``R`` is."""
    R.require(Convention.PLAIN)
    if abs(det := np.linalg.det(R.entries)) <= SINGULARITY_THRESHOLD:
        raise SingularMatrixError(det)
    inverse = RMat(linalg.inv(R.entries), Convention.PLAIN)
    if qybe_residual(R) <= tolerance and (residual := qybe_residual(inverse)) > tolerance:
        LOGGER.warning("R_D lost the Yang-Baxter property numerically: %.3g", residual)
    return inverse


@dataclass(frozen=True)
class StarProperty:
    """One line of a `StarReport`."""

    holds: bool
    residual: float


@dataclass(frozen=True)
class StarReport:
    """Self-adjointness, unitarity and involutivity of ``R̂``."""

    self_adjoint: StarProperty
    unitary: StarProperty
    involutive: StarProperty


def star_report(Rhat: RMat, tolerance: float = DEFAULT_TOLERANCE) -> StarReport:  # pylint: disable=invalid-name
    """Residuals ``‖R̂ − R̂†‖``, ``‖R̂R̂† − I‖`` and ``‖R̂² − I‖``."""
    Rhat.require(Convention.HAT)
    h = Rhat.entries
    eye = np.eye(h.shape[0])

    def prop(residual: float) -> StarProperty:
        return StarProperty(residual <= tolerance, residual)

    return StarReport(
        self_adjoint=prop(_max_abs(h - h.conj().T)),
        unitary=prop(_max_abs(h @ h.conj().T - eye)),
        involutive=prop(_max_abs(h @ h - eye)),
    )


@dataclass(frozen=True, eq=False)
class SemiclassicalLimit:
    """First-order data of an R-matrix family at q = 1: ``R ≈ I + ε M = I + i w``."""

    derivative: np.ndarray
    """``M = dR/dq`` at q = 1."""
    w: CoefTensor2
    r: CoefTensor2
    """Antisymmetric part of w."""
    s: CoefTensor2
    """``i·`` symmetric part of w, so that ``w = r − i s``."""

    @property
    def s_is_real(self) -> bool:
        """Whether s has real coefficients (the symmetric part of w is imaginary)."""
        return _max_abs(self.s.coeffs.imag) <= SEMICLASSICAL_TOLERANCE


RMatFamily = Callable[[complex], RMat]


def semiclassical_w(
    R_family: RMatFamily,  # pylint: disable=invalid-name
    basis: LieAlgebraRep,
    epsilon: float = 1.0,
    tolerance: float = SEMICLASSICAL_TOLERANCE,
) -> SemiclassicalLimit:
    """Extract ``w = −i dR/dq|_{q=1}`` over ``basis⊗basis`` and split it as ``r − i s``.

    The derivative is a Richardson-extrapolated central difference; ``epsilon``
    scales the reported tensors (ε = q − 1 normalised to 1 by default).
    """
    unit = R_family(1.0).to_plain().entries
    if (offset := _max_abs(unit - np.eye(unit.shape[0]))) > tolerance:
        raise InputError(f"R(1) is not the identity (offset {offset:.3g})")

    def central(step: float) -> np.ndarray:
        upper = R_family(1.0 + step).to_plain().entries
        lower = R_family(1.0 - step).to_plain().entries
        return (upper - lower) / (2 * step)

    coarse, fine = (central(step) for step in DERIVATIVE_STEPS)
    ratio = (DERIVATIVE_STEPS[0] / DERIVATIVE_STEPS[1]) ** 2
    derivative = (ratio * fine - coarse) / (ratio - 1)
    w = CoefTensor2(basis, epsilon * basis.expand2(-1j * derivative, tolerance))
    sym, anti = split_sym_anti(w)
    LOGGER.debug("Semiclassical w extracted: max coefficient %.3g", w.max_abs())
    return SemiclassicalLimit(derivative=derivative, w=w, r=anti, s=sym * 1j)
