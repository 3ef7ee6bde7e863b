"""Coordinate Poisson bivectors on matrix groups and Poisson-map checks.

A bivector is tabulated on the matrix-entry coordinates: entry
``[(i, j), (k, l)]`` of a `BracketTable` is the bracket of the coordinate
functions ``(i, j)`` and ``(k, l)``, flattened row-major (``(i, j) ↦ i·n + j``).
All checks are pointwise at sampled group elements.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from propcache import cached_property
from scipy import linalg

from . import LOGGER, VERBOSE
from .const import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_TOLERANCE,
    JACOBIAN_STEP,
    JACOBIATOR_STEP,
    SINGULARITY_THRESHOLD,
)
from .exceptions import InputError, SingularMatrixError
from .lie_tensor import CoefTensor2, LieAlgebraRep, adjoint_action2


@dataclass(frozen=True, eq=False)
class GroupPoint:
    """An invertible matrix representing a group element."""

    matrix: np.ndarray

    def __post_init__(self):
        matrix = np.asarray(self.matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InputError(f"group element must be square, got {matrix.shape}")
        if abs(det := np.linalg.det(matrix)) <= SINGULARITY_THRESHOLD:
            raise SingularMatrixError(det)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def identity(cls, n: int) -> GroupPoint:
        """The unit e."""
        return cls(np.eye(n))

    @classmethod
    def exp(cls, alg: LieAlgebraRep, coeffs) -> GroupPoint:
        """``exp(Σ x^k X_k)``."""
        return cls(linalg.expm(alg.element(coeffs)))

    @classmethod
    def random(cls, alg: LieAlgebraRep, rng: np.random.Generator) -> GroupPoint:
        """exp of an algebra element with coefficients uniform in [-1, 1]."""
        return cls.exp(alg, rng.uniform(-1.0, 1.0, alg.dim))

    @property
    def n(self) -> int:
        """Matrix size."""
        return self.matrix.shape[0]

    @cached_property
    def inverse(self) -> np.ndarray:
        """The inverse matrix."""
        return np.linalg.inv(self.matrix)

    def __matmul__(self, other: GroupPoint) -> GroupPoint:
        return GroupPoint(self.matrix @ other.matrix)


@dataclass(frozen=True, eq=False)
class BracketTable:
    """Brackets of coordinate functions evaluated at a point."""

    entries: np.ndarray

    def antisymmetry_residual(self) -> float:
        """Max-norm of ``B + Bᵀ``."""
        return float(np.max(np.abs(self.entries + self.entries.T), initial=0.0))

    def max_abs(self) -> float:
        """Largest entry magnitude."""
        return float(np.max(np.abs(self.entries), initial=0.0))

    def __sub__(self, other: BracketTable) -> BracketTable:
        return BracketTable(self.entries - other.entries)


PhiFunction = Callable[[GroupPoint, GroupPoint], CoefTensor2]


@dataclass(frozen=True, eq=False)
class TwoLinkSpec:
    """Data of the two-link structure ``π₊(a) ⊕ π₊(b) ⊕ π_⋈(a, b)``."""

    algebra: LieAlgebraRep
    r: CoefTensor2
    phi: PhiFunction
    constant: bool = field(default=False)
    """``True`` if ``phi`` does not depend on its arguments."""

    def __post_init__(self):
        self.r.require_antisymmetric()

    @classmethod
    def with_constant_phi(
        cls, algebra: LieAlgebraRep, r: CoefTensor2, phi: CoefTensor2
    ) -> TwoLinkSpec:
        """A two-link setup with ``φ(a, b) = phi`` everywhere."""
        return cls(algebra, r, lambda a, b: phi, constant=True)

    @classmethod
    def with_ad_b_f(
        cls,
        algebra: LieAlgebraRep,
        r: CoefTensor2,
        tensor: CoefTensor2,
        f_scale: complex = 1.0,
    ) -> TwoLinkSpec:
        """A two-link setup with ``φ(a, b) = −r + Ad_b⊗Ad_b f(ab)``, ``f(x) = f_scale·tr(x)·tensor``."""

        def phi(a: GroupPoint, b: GroupPoint) -> CoefTensor2:
            scale = f_scale * np.trace(a.matrix @ b.matrix)
            return adjoint_action2(algebra, b, tensor * scale) - r

        return cls(algebra, r, phi)


def _table(coeffs, alg: LieAlgebraRep, left1, right1, left2, right2) -> np.ndarray:
    """``Σ t^{mn} (L1 X_m R1)_{ij} (L2 X_n R2)_{kl}`` as an ``n²×n²`` array."""
    n = alg.n
    first = left1 @ alg.basis @ right1
    second = left2 @ alg.basis @ right2
    return np.einsum("mn,mij,nkl->ijkl", coeffs, first, second).reshape(n * n, n * n)


def bracket_sklyanin(alg: LieAlgebraRep, r: CoefTensor2, g: GroupPoint) -> BracketTable:
    """The coboundary structure ``π(g) = rg − gr``."""
    r.require_antisymmetric()
    eye, m = np.eye(alg.n), g.matrix
    return BracketTable(
        _table(r.coeffs, alg, eye, m, eye, m) - _table(r.coeffs, alg, m, eye, m, eye)
    )


def bracket_plus(alg: LieAlgebraRep, r: CoefTensor2, g: GroupPoint) -> BracketTable:
    """The plus structure ``π₊(g) = rg + gr``."""
    r.require_antisymmetric()
    eye, m = np.eye(alg.n), g.matrix
    return BracketTable(
        _table(r.coeffs, alg, eye, m, eye, m) + _table(r.coeffs, alg, m, eye, m, eye)
    )


def bracket_cross(
    alg: LieAlgebraRep, phi_value: CoefTensor2, a: GroupPoint, b: GroupPoint
) -> BracketTable:
    """The {a-coordinate, b-coordinate} block of ``π_⋈(a, b) = (a, e) φ (e, b)``."""
    eye = np.eye(alg.n)
    return BracketTable(_table(phi_value.coeffs, alg, a.matrix, eye, eye, b.matrix))


def assemble_two_link(link: TwoLinkSpec, a: GroupPoint, b: GroupPoint) -> BracketTable:
    """The full ``2n²×2n²`` table of ``π₊₊(a, b)``."""
    alg = link.algebra
    cross = bracket_cross(alg, link.phi(a, b), a, b).entries
    return BracketTable(
        np.block(
            [
                [bracket_plus(alg, link.r, a).entries, cross],
                [-cross.T, bracket_plus(alg, link.r, b).entries],
            ]
        )
    )


def _left_right(left, right) -> np.ndarray:
    """Matrix of ``X ↦ left·X·right`` on row-major flattened matrices."""
    return np.kron(left, np.asarray(right).T)


def map_one_link(
    x: GroupPoint, y: GroupPoint, z: GroupPoint
) -> tuple[GroupPoint, np.ndarray]:
    """``(x, y, z) ↦ xyz⁻¹`` and its ``n²×3n²`` Jacobian."""
    zinv = z.inverse
    value = x.matrix @ y.matrix @ zinv
    eye = np.eye(x.n)
    jacobian = np.hstack(
        [
            _left_right(eye, y.matrix @ zinv),
            _left_right(x.matrix, zinv),
            -_left_right(value, zinv),
        ]
    )
    return GroupPoint(value), jacobian


def map_two_link(
    a: GroupPoint, g: GroupPoint, b: GroupPoint
) -> tuple[tuple[GroupPoint, GroupPoint], np.ndarray]:
    """``(a, g, b) ↦ (ag⁻¹, gb)`` and its ``2n²×3n²`` Jacobian."""
    ginv = g.inverse
    first = a.matrix @ ginv
    eye = np.eye(a.n)
    zero = np.zeros((a.n**2, a.n**2))
    jacobian = np.block(
        [
            [_left_right(eye, ginv), -_left_right(first, ginv), zero],
            [zero, _left_right(eye, b.matrix), _left_right(g.matrix, eye)],
        ]
    )
    return (GroupPoint(first), GroupPoint(g.matrix @ b.matrix)), jacobian


def map_multiply(a: GroupPoint, b: GroupPoint) -> tuple[GroupPoint, np.ndarray]:
    """``(a, b) ↦ ab`` and its ``n²×2n²`` Jacobian."""
    eye = np.eye(a.n)
    jacobian = np.hstack([_left_right(eye, b.matrix), _left_right(a.matrix, eye)])
    return a @ b, jacobian


def _as_points(value) -> tuple[GroupPoint, ...]:
    return (value,) if isinstance(value, GroupPoint) else tuple(value)


def poisson_map_residual(
    source_table_fn: Callable[..., BracketTable],
    map_op: Callable[..., tuple],
    target_table_fn: Callable[..., BracketTable],
    point: Sequence[GroupPoint],
) -> float:
    """``‖J Π_source Jᵀ − Π_target(Φ(point))‖_max`` at one point."""
    value, jacobian = map_op(*point)
    pushed = jacobian @ source_table_fn(*point).entries @ jacobian.T
    target = target_table_fn(*_as_points(value)).entries
    residual = float(np.max(np.abs(pushed - target)))
    LOGGER.log(VERBOSE, "Poisson map residual %.3g", residual)
    return residual


def finite_difference_jacobian(
    map_op: Callable[..., tuple],
    point: Sequence[GroupPoint],
    step: float = JACOBIAN_STEP,
) -> np.ndarray:
    """Central-difference Jacobian of ``map_op`` in the matrix-entry coordinates."""

    def flat_value(matrices) -> np.ndarray:
        value, _ = map_op(*(GroupPoint(m) for m in matrices))
        return np.concatenate([p.matrix.reshape(-1) for p in _as_points(value)])

    base = [p.matrix for p in point]
    columns = []
    for index, matrix in enumerate(base):
        for entry in np.ndindex(matrix.shape):
            plus = [m.copy() for m in base]
            minus = [m.copy() for m in base]
            plus[index][entry] += step
            minus[index][entry] -= step
            columns.append((flat_value(plus) - flat_value(minus)) / (2 * step))
    return np.stack(columns, axis=1)


def jacobian_error(
    map_op: Callable[..., tuple],
    point: Sequence[GroupPoint],
    step: float = JACOBIAN_STEP,
) -> float:
    """Relative max-norm gap between the analytic and finite-difference Jacobians."""
    _, analytic = map_op(*point)
    numeric = finite_difference_jacobian(map_op, point, step)
    scale = max(1.0, float(np.max(np.abs(analytic))))
    return float(np.max(np.abs(analytic - numeric))) / scale


def sample_points(
    alg: LieAlgebraRep,
    count: int = DEFAULT_SAMPLES,
    arity: int = 3,
    seed: int = DEFAULT_SEED,
) -> list[tuple[GroupPoint, ...]]:
    """Random tuples of group points, one independent stream per sample."""
    streams = np.random.SeedSequence(seed).spawn(count)
    points = []
    for stream in streams:
        rng = np.random.default_rng(stream)
        points.append(tuple(GroupPoint.random(alg, rng) for _ in range(arity)))
    return points


def one_link_source(alg: LieAlgebraRep, r: CoefTensor2) -> Callable[..., BracketTable]:
    """``(G, π) × (G, π₊) × (G, π)`` at ``(x, y, z)``."""

    def table(x: GroupPoint, y: GroupPoint, z: GroupPoint) -> BracketTable:
        return BracketTable(
            linalg.block_diag(
                bracket_sklyanin(alg, r, x).entries,
                bracket_plus(alg, r, y).entries,
                bracket_sklyanin(alg, r, z).entries,
            )
        )

    return table


def two_link_source(link: TwoLinkSpec) -> Callable[..., BracketTable]:
    """``π₊₊(a, b) ⊕ π(g)`` at ``(a, g, b)``, with ``g`` in the middle slot."""
    alg = link.algebra
    size = alg.n**2

    def table(a: GroupPoint, g: GroupPoint, b: GroupPoint) -> BracketTable:
        pair = assemble_two_link(link, a, b).entries
        entries = np.zeros((3 * size, 3 * size), dtype=complex)
        outer = np.r_[0:size, 2 * size : 3 * size]
        entries[np.ix_(outer, outer)] = pair
        entries[size : 2 * size, size : 2 * size] = bracket_sklyanin(alg, link.r, g).entries
        return BracketTable(entries)

    return table


def one_link_residual(alg: LieAlgebraRep, r: CoefTensor2, points) -> float:
    """Max Poisson-map residual of ``(x, y, z) ↦ xyz⁻¹`` into ``(G, π₊)``."""
    target = lambda value: bracket_plus(alg, r, value)  # noqa: E731
    return max(
        (poisson_map_residual(one_link_source(alg, r), map_one_link, target, p) for p in points),
        default=0.0,
    )


def two_link_residual(link: TwoLinkSpec, points) -> float:
    """Max Poisson-map residual of ``(a, g, b) ↦ (ag⁻¹, gb)`` into ``π₊₊``."""
    source = two_link_source(link)
    target = lambda a, b: assemble_two_link(link, a, b)  # noqa: E731
    return max(
        (poisson_map_residual(source, map_two_link, target, p) for p in points),
        default=0.0,
    )


@dataclass(frozen=True)
class PhiConditionResult:
    """Outcome of `phi_condition_check`."""

    passed: bool
    cocycle_residual: float
    map_residual: float

    @property
    def residual(self) -> float:
        """The larger of the two residuals."""
        return max(self.cocycle_residual, self.map_residual)


def phi_condition_check(
    link: TwoLinkSpec,
    samples: Sequence[tuple[GroupPoint, GroupPoint, GroupPoint]],
    tolerance: float = DEFAULT_TOLERANCE,
) -> PhiConditionResult:
    """Check ``ψ(ag⁻¹, gb) = Ad_g ψ(a, b)`` for ``ψ = φ + r`` and the two-link map."""
    alg, r = link.algebra, link.r
    cocycle = 0.0
    for a, g, b in samples:
        (moved_a, moved_b), _ = map_two_link(a, g, b)
        psi = link.phi(a, b) + r
        moved = link.phi(moved_a, moved_b) + r
        cocycle = max(cocycle, (moved - adjoint_action2(alg, g, psi)).max_abs())
    mapped = two_link_residual(link, samples)
    LOGGER.debug("phi condition: cocycle=%.3g map=%.3g", cocycle, mapped)
    return PhiConditionResult(
        passed=cocycle <= tolerance and mapped <= tolerance,
        cocycle_residual=cocycle,
        map_residual=mapped,
    )


def multiplication_residual(
    link: TwoLinkSpec, points: Sequence[tuple[GroupPoint, GroupPoint]]
) -> float:
    """Max residual of ``(a, b) ↦ ab`` as a map from ``π₊₊`` to ``π₊``."""
    source = lambda a, b: assemble_two_link(link, a, b)  # noqa: E731
    target = lambda value: bracket_plus(link.algebra, link.r, value)  # noqa: E731
    return max(
        (poisson_map_residual(source, map_multiply, target, p[:2]) for p in points),
        default=0.0,
    )


def jacobi_residual(
    link: TwoLinkSpec,
    points: Sequence[tuple[GroupPoint, GroupPoint]],
    step: float = JACOBIATOR_STEP,
) -> float:
    """Max Jacobiator of ``π₊₊`` over coordinate triples, by central differences."""
    if not link.constant:
        raise InputError("jacobi_residual requires a constant phi")
    n = link.algebra.n
    size = n * n

    def table(coords: np.ndarray) -> np.ndarray:
        a = GroupPoint(coords[:size].reshape(n, n))
        b = GroupPoint(coords[size:].reshape(n, n))
        return assemble_two_link(link, a, b).entries

    worst = 0.0
    for a, b in (p[:2] for p in points):
        coords = np.concatenate([a.matrix.reshape(-1), b.matrix.reshape(-1)])
        pi = table(coords)
        derivative = np.empty((coords.size,) + pi.shape, dtype=complex)
        for index in range(coords.size):
            shift = np.zeros_like(coords)
            shift[index] = step
            derivative[index] = (table(coords + shift) - table(coords - shift)) / (2 * step)
        jacobiator = (
            np.einsum("il,ljk->ijk", pi, derivative)
            + np.einsum("jl,lki->ijk", pi, derivative)
            + np.einsum("kl,lij->ijk", pi, derivative)
        )
        worst = max(worst, float(np.max(np.abs(jacobiator))))
    LOGGER.debug("Jacobiator max %.3g over %d points", worst, len(points))
    return worst


def pushforward_formula_check(
    alg: LieAlgebraRep,
    r: CoefTensor2,
    a: GroupPoint,
    g: GroupPoint,
    b: GroupPoint,
    side: str = "right",
) -> float:
    """Compare the closed form of ``Φ_*(rg)`` (or ``Φ_*(gr)``) with the Jacobian pushforward.

    ``Φ_*(rg) = (ag⁻¹r)_(1) + (rgb)_(2) − (ag⁻¹)_(1) r_[12] (gb)_(2)`` and
    ``Φ_*(gr) = (arg⁻¹)_(1) + (grb)_(2) − (a, g) r_[12] (g⁻¹, b)``.
    """
    eye, ginv = np.eye(alg.n), g.inverse
    am, gm, bm = a.matrix, g.matrix, b.matrix
    if side == "right":
        source = _table(r.coeffs, alg, eye, gm, eye, gm)
        first, second = (am @ ginv, eye), (eye, gm @ bm)
    elif side == "left":
        source = _table(r.coeffs, alg, gm, eye, gm, eye)
        first, second = (am, ginv), (gm, bm)
    else:
        raise InputError(f"side must be 'right' or 'left', got {side!r}")
    cross = _table(-r.coeffs, alg, *first, *second)
    analytic = np.block(
        [
            [_table(r.coeffs, alg, *first, *first), cross],
            [-cross.T, _table(r.coeffs, alg, *second, *second)],
        ]
    )
    _, jacobian = map_two_link(a, g, b)
    size = alg.n**2
    g_columns = jacobian[:, size : 2 * size]
    pushed = g_columns @ source @ g_columns.T
    return float(np.max(np.abs(pushed - analytic)))


def is_real_tensor(t: CoefTensor2, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """``True`` if every coefficient of ``t`` is real within tolerance."""
    return float(np.max(np.abs(t.coeffs.imag), initial=0.0)) <= tolerance
