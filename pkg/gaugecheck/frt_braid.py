"""Quadratic FRT-type algebras: plus relations, braiding, straightening and ideal membership.

Generators are ``v^i_j`` and ``w^i_j`` (``u`` is accepted as an alias of
``v``), with 1-based indices. A monomial is normal-ordered when every
``v`` precedes every ``w``; the cross rule

    w^a_l v^k_b → Σ_{s,t} R̂^{sa}_{tb} v^k_s w^t_l

moves a ``w`` past a ``v`` and removes exactly one inversion.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from itertools import product
from types import MappingProxyType

import numpy as np
from scipy import linalg

from . import LOGGER, VERBOSE
from .const import (
    DEFAULT_TOLERANCE,
    LSTSQ_CUTOFF,
    MAX_IDEAL_DEGREE,
    RANK_CUTOFF,
    SPAN_CHUNK,
    ZERO_COEFFICIENT,
)
from .exceptions import DegreeOverflowError, InputError
from .rmatrix import Convention, RMat, braid_residual, conventions

FAMILIES = ("v", "w")


@dataclass(frozen=True, order=True)
class GenSymbol:
    """A generator ``family^upper_lower``."""

    family: str
    upper: int
    lower: int

    def __post_init__(self):
        if self.family == "u":
            object.__setattr__(self, "family", "v")
        if self.family not in FAMILIES:
            raise InputError(f"unknown generator family {self.family!r}")
        if self.upper < 1 or self.lower < 1:
            raise InputError(f"generator indices start at 1: {self}")

    def __str__(self) -> str:
        return f"{self.family}^{self.upper}_{self.lower}"


Monomial = tuple[GenSymbol, ...]


def _symbols(family: str, size: int) -> list[GenSymbol]:
    return [GenSymbol(family, i, j) for i in range(1, size + 1) for j in range(1, size + 1)]


def inversions(monomial: Monomial) -> int:
    """Number of (w, v) pairs with the w to the left."""
    count = seen_w = 0
    for symbol in monomial:
        if symbol.family == "w":
            seen_w += 1
        else:
            count += seen_w
    return count


class NCPoly:
    """A noncommutative polynomial with complex coefficients."""

    __slots__ = ("_terms",)
    __array_ufunc__ = None

    def __init__(self, terms: Mapping[Monomial, complex] | None = None) -> None:
        """Drop coefficients at or below `ZERO_COEFFICIENT`."""
        self._terms = {
            tuple(mono): complex(coeff)
            for mono, coeff in (terms or {}).items()
            if abs(coeff) > ZERO_COEFFICIENT
        }

    @classmethod
    def monomial(cls, *symbols: GenSymbol, coeff: complex = 1.0) -> NCPoly:
        """A single term."""
        return cls({tuple(symbols): coeff})

    @property
    def terms(self) -> Mapping[Monomial, complex]:
        """Read-only view of the terms."""
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        """``True`` if there are no terms."""
        return not self._terms

    def degrees(self) -> set[int]:
        """Degrees of the terms."""
        return {len(mono) for mono in self._terms}

    @property
    def degree(self) -> int:
        """Largest degree, 0 for the zero polynomial."""
        return max(self.degrees(), default=0)

    def is_homogeneous(self) -> bool:
        """``True`` if all terms have the same degree."""
        return len(self.degrees()) <= 1

    def v_counts(self) -> set[int]:
        """Numbers of v-generators occurring in the terms."""
        return {sum(s.family == "v" for s in mono) for mono in self._terms}

    def is_normal_ordered(self) -> bool:
        """``True`` if no w precedes a v in any term."""
        return all(inversions(mono) == 0 for mono in self._terms)

    def max_abs(self) -> float:
        """Largest coefficient magnitude."""
        return max((abs(c) for c in self._terms.values()), default=0.0)

    def evaluate_commuting(self, values: Mapping[GenSymbol, complex]) -> complex:
        """Value when every generator is replaced by a commuting number."""
        total = 0j
        for mono, coeff in self._terms.items():
            term = coeff
            for symbol in mono:
                term *= values[symbol]
            total += term
        return total

    def __add__(self, other: NCPoly) -> NCPoly:
        terms = defaultdict(complex, self._terms)
        for mono, coeff in other._terms.items():
            terms[mono] += coeff
        return NCPoly(terms)

    def __sub__(self, other: NCPoly) -> NCPoly:
        return self + (-1.0) * other

    def __neg__(self) -> NCPoly:
        return (-1.0) * self

    def __mul__(self, other) -> NCPoly:
        if not isinstance(other, NCPoly):
            return NCPoly({mono: coeff * other for mono, coeff in self._terms.items()})
        terms = defaultdict(complex)
        for (left, c1), (right, c2) in product(self._terms.items(), other._terms.items()):
            terms[left + right] += c1 * c2
        return NCPoly(terms)

    def __rmul__(self, scalar) -> NCPoly:
        return self * scalar

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None

    def __iter__(self) -> Iterator[tuple[Monomial, complex]]:
        return iter(sorted(self._terms.items()))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        return " + ".join(
            f"({coeff:.6g})*" + "*".join(str(s) for s in mono) for mono, coeff in self
        )

    def __repr__(self) -> str:
        return f"{__class__.__name__}({dict(self)!r})"


@dataclass(frozen=True, eq=False)
class RelationSet:
    """Homogeneous quadratic relations in one generator family."""

    family: str
    elements: tuple[NCPoly, ...]
    labels: tuple[tuple[int, int, int, int], ...]
    """``(p, q, l, m)`` of each element."""
    degree: int = field(default=2)

    def rank(self) -> int:
        """Dimension of the span of the relations."""
        matrix, _ = _coefficient_matrix(self.elements)
        if not matrix.size:
            return 0
        return int(np.linalg.matrix_rank(matrix, tol=LSTSQ_CUTOFF * max(1.0, np.abs(matrix).max())))


def frt_relations(Rhat: RMat, family: str, right: np.ndarray | None = None) -> RelationSet:  # pylint: disable=invalid-name
    """Entries of ``R̂ (x⊗x) − (x⊗x) right`` for ``x`` in ``family``.

    ``right`` defaults to ``R̂`` itself.
    """
    Rhat.require(Convention.HAT)
    size, hat = Rhat.N, Rhat.entries
    right = hat if right is None else np.asarray(right)
    family = GenSymbol(family, 1, 1).family

    def x(i: int, j: int) -> GenSymbol:
        return GenSymbol(family, i + 1, j + 1)

    elements, labels = [], []
    for p, q, l, m in product(range(size), repeat=4):
        terms = defaultdict(complex)
        for j, k in product(range(size), repeat=2):
            terms[(x(j, l), x(k, m))] += hat[p * size + q, j * size + k]
            terms[(x(p, j), x(q, k))] -= right[j * size + k, l * size + m]
        elements.append(NCPoly(terms))
        labels.append((p + 1, q + 1, l + 1, m + 1))
    return RelationSet(family, tuple(elements), tuple(labels))


def plus_relations(Rhat: RMat, family: str) -> RelationSet:  # pylint: disable=invalid-name
    """The plus relations ``R̂ (x⊗x) = (x⊗x) R̂₂₁``."""
    return frt_relations(Rhat, family, conventions(Rhat).rhat21)


def basic_relations(Rhat: RMat, family: str) -> RelationSet:  # pylint: disable=invalid-name
    """The one-link relations ``R̂ (x⊗x) = (x⊗x) R̂``."""
    return frt_relations(Rhat, family)


class CrossRules(Mapping):
    """Rewrite rules ``w^a_l v^k_b → Σ R̂^{sa}_{tb} v^k_s w^t_l`` keyed by ``(w, v)``."""

    def __init__(self, rules: Mapping[tuple[GenSymbol, GenSymbol], NCPoly], size: int) -> None:
        """Wrap precomputed rules for fundamental dimension ``size``."""
        self._rules = dict(rules)
        self.size = size

    def __getitem__(self, key: tuple[GenSymbol, GenSymbol]) -> NCPoly:
        return self._rules[key]

    def __iter__(self):
        return iter(self._rules)

    def __len__(self) -> int:
        return len(self._rules)


def cross_relations(Rhat: RMat) -> CrossRules:  # pylint: disable=invalid-name
    """The braiding between the v and w copies of the plus algebra."""
    Rhat.require(Convention.HAT)
    size, hat = Rhat.N, Rhat.entries
    rules = {}
    for a, l, k, b in product(range(size), repeat=4):
        terms = {
            (GenSymbol("v", k + 1, s + 1), GenSymbol("w", t + 1, l + 1)): hat[
                s * size + a, t * size + b
            ]
            for s, t in product(range(size), repeat=2)
        }
        key = (GenSymbol("w", a + 1, l + 1), GenSymbol("v", k + 1, b + 1))
        rules[key] = NCPoly(terms)
    return CrossRules(rules, size)


def straighten_with_depth(rules: CrossRules, p: NCPoly) -> tuple[NCPoly, int]:
    """Normal-order ``p``; also return the longest chain of rewrites applied to one monomial."""
    result = defaultdict(complex)
    depth = 0
    stack = [(mono, coeff, 0) for mono, coeff in p.terms.items()]
    while stack:
        mono, coeff, steps = stack.pop()
        position = next(
            (
                i
                for i in range(len(mono) - 1)
                if mono[i].family == "w" and mono[i + 1].family == "v"
            ),
            None,
        )
        if position is None:
            result[mono] += coeff
            depth = max(depth, steps)
            continue
        for (v_new, w_new), factor in rules[(mono[position], mono[position + 1])].terms.items():
            rewritten = mono[:position] + (v_new, w_new) + mono[position + 2 :]
            stack.append((rewritten, coeff * factor, steps + 1))
    return NCPoly(result), depth


def straighten(rules: CrossRules, p: NCPoly) -> NCPoly:
    """Normal-order ``p`` with the cross rules."""
    return straighten_with_depth(rules, p)[0]


def compose_generators(N: int) -> list[NCPoly]:  # pylint: disable=invalid-name
    """``(vw)^i_j = Σ_a v^i_a w^a_j`` in row-major order of ``(i, j)``."""
    if N < 1:
        raise InputError(f"N must be positive, got {N}")
    return [
        sum(
            (
                NCPoly.monomial(GenSymbol("v", i, a), GenSymbol("w", a, j))
                for a in range(1, N + 1)
            ),
            NCPoly(),
        )
        for i in range(1, N + 1)
        for j in range(1, N + 1)
    ]


def _coefficient_matrix(
    polys: Iterable[NCPoly], monomials: dict[Monomial, int] | None = None
) -> tuple[np.ndarray, dict[Monomial, int]]:
    """Columns are the coefficient vectors of ``polys``."""
    polys = list(polys)
    index = dict(monomials or {})
    for poly in polys:
        for mono in poly.terms:
            index.setdefault(mono, len(index))
    matrix = np.zeros((len(index), len(polys)), dtype=complex)
    for column, poly in enumerate(polys):
        for mono, coeff in poly.terms.items():
            matrix[index[mono], column] = coeff
    return matrix, index


@dataclass(frozen=True)
class Certificate:
    """Outcome of an ideal membership test."""

    member: bool
    distance: float
    """Max-norm distance from the polynomial to the span."""
    coefficients: tuple[tuple[str, complex], ...] = ()
    """``(generator label, coefficient)`` pairs of the combination."""
    generators: tuple[NCPoly, ...] = field(default=(), repr=False)
    """The straightened generators the coefficients multiply."""

    def combination(self) -> NCPoly:
        """Re-expand the certificate."""
        return sum(
            (c * g for (_, c), g in zip(self.coefficients, self.generators)), NCPoly()
        )


def _monomial_label(mono: Monomial) -> str:
    return "*".join(str(s) for s in mono) or "1"


def _generator_label(left: Monomial, family: str, label, right: Monomial) -> str:
    return f"{_monomial_label(left)}|{family}{label}|{_monomial_label(right)}"


def _words(family: str, size: int, length: int) -> dict[Monomial, int]:
    """Row index of every word of ``length`` generators of one family."""
    return {word: i for i, word in enumerate(product(_symbols(family, size), repeat=length))}


def _independent_columns(matrix: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pivots of a maximal independent set of columns, and an orthonormal basis of their complement."""
    rows = matrix.shape[0]
    if not matrix.shape[1] or np.abs(matrix).max() <= ZERO_COEFFICIENT:
        return np.arange(0), np.eye(rows, dtype=complex)
    q, r, pivots = linalg.qr(matrix, pivoting=True)
    diagonal = np.abs(np.diag(r))
    rank = int(np.sum(diagonal > RANK_CUTOFF * diagonal[0]))
    return pivots[:rank], q[:, rank:]


class _FamilyIdeal:
    """Degree-``length`` part of the ideal of the plus relations inside one family.

    Only an independent subset of the placements ``m_L · rel · m_R`` is kept.
    """

    def __init__(self, Rhat: RMat, family: str, length: int) -> None:  # pylint: disable=invalid-name
        self.family = family
        self.words = _words(family, Rhat.N, length)
        placements = []
        if length >= 2:
            symbols = _symbols(family, Rhat.N)
            relations = self.relations(Rhat, family)
            for left_length in range(length - 1):
                sides = product(
                    product(symbols, repeat=left_length),
                    product(symbols, repeat=length - 2 - left_length),
                )
                for (left, right), (label, rel) in product(sides, relations):
                    poly = NCPoly.monomial(*left) * rel * NCPoly.monomial(*right)
                    placements.append((left, label, right, poly))
        matrix = np.zeros((len(self.words), len(placements)), dtype=complex)
        for column, (*_, poly) in enumerate(placements):
            for mono, coeff in poly.terms.items():
                matrix[self.words[mono], column] += coeff
        keep, self.complement = _independent_columns(matrix)
        self.placements = [placements[i] for i in keep]
        self.basis = matrix[:, keep]

    @staticmethod
    def relations(Rhat: RMat, family: str) -> list[tuple[tuple[int, ...], NCPoly]]:  # pylint: disable=invalid-name
        """Nonzero plus relations with their labels."""
        relations = plus_relations(Rhat, family)
        return [(l, r) for l, r in zip(relations.labels, relations.elements) if not r.is_zero]

    def coefficients(self, values: np.ndarray) -> np.ndarray:
        """Least-squares coordinates of the columns of ``values`` over `basis`."""
        if not self.basis.shape[1]:
            return np.zeros((0, values.shape[1]), dtype=complex)
        solution, *_ = linalg.lstsq(self.basis, values, cond=LSTSQ_CUTOFF)
        return solution


class _NormalFormSpan:
    """Normal-ordered part of the relation ideal in one degree and v-count.

    A normal-ordered monomial ``v…v w…w`` is a cell of a grid indexed by its
    v-word and its w-word. Placements of a relation that are normal-ordered as
    written span ``I_v ⊗ W + V ⊗ I_w``, whose orthogonal complement is the
    product of the two family complements. Every other placement is
    straightened and kept only through its component in that complement.
    """

    def __init__(
        self, Rhat: RMat, rules: CrossRules, degree: int, v_count: int  # pylint: disable=invalid-name
    ) -> None:
        self.v_count = v_count
        self.v_ideal = _FamilyIdeal(Rhat, "v", v_count)
        self.w_ideal = _FamilyIdeal(Rhat, "w", degree - v_count)
        self.shape = (self.v_ideal.complement.shape[1], self.w_ideal.complement.shape[1])

        pending = list(self._mixed_placements(Rhat, rules, degree))
        dim = self.shape[0] * self.shape[1]
        span = np.zeros((dim, 0), dtype=complex)
        kept, columns = [], []
        for start in range(0, len(pending), SPAN_CHUNK):
            chunk = pending[start : start + SPAN_CHUNK]
            coords = self.reduce(np.stack([self.grid(poly) for *_, poly in chunk]))
            scale = max(1.0, float(np.linalg.norm(coords, axis=0).max(initial=0.0)))
            residual = coords - span @ (span.conj().T @ coords)
            if np.abs(residual).max(initial=0.0) <= RANK_CUTOFF * scale:
                continue
            q, r, pivots = linalg.qr(residual, mode="economic", pivoting=True)
            rank = int(np.sum(np.abs(np.diag(r)) > RANK_CUTOFF * scale))
            span = np.hstack([span, q[:, :rank]])
            kept.extend(chunk[i] for i in pivots[:rank])
            columns.append(coords[:, pivots[:rank]])
        self.extras = kept
        self.extra_coords = np.hstack(columns) if columns else np.zeros((dim, 0), dtype=complex)
        LOGGER.debug(
            "Normal-form span degree %d, %d v: %d mixed placements, %d outside the product span",
            degree,
            v_count,
            len(pending),
            len(kept),
        )

    def _mixed_placements(self, Rhat: RMat, rules: CrossRules, degree: int):  # pylint: disable=invalid-name
        """Straightened placements that are not normal-ordered as written."""
        symbols = _symbols("v", Rhat.N) + _symbols("w", Rhat.N)
        for family in FAMILIES:
            relations = _FamilyIdeal(Rhat, family, 2).placements
            rel_v = 2 if family == "v" else 0
            for left_length in range(degree - 1):
                for left, right in product(
                    product(symbols, repeat=left_length),
                    product(symbols, repeat=degree - 2 - left_length),
                ):
                    if sum(s.family == "v" for s in left + right) + rel_v != self.v_count:
                        continue
                    if family == "v" and inversions(left + (symbols[0],) + right) == 0:
                        continue
                    if family == "w" and inversions(left + (symbols[-1],) + right) == 0:
                        continue
                    for _, label, _, rel in relations:
                        poly = NCPoly.monomial(*left) * rel * NCPoly.monomial(*right)
                        yield left, f"{family}{label}", right, straighten(rules, poly)

    def grid(self, poly: NCPoly) -> np.ndarray:
        """Coefficients of a normal-ordered polynomial on the v-word by w-word grid."""
        values = np.zeros((len(self.v_ideal.words), len(self.w_ideal.words)), dtype=complex)
        rows, cols = self.v_ideal.words, self.w_ideal.words
        for mono, coeff in poly.terms.items():
            values[rows[mono[: self.v_count]], cols[mono[self.v_count :]]] += coeff
        return values

    def reduce(self, grids: np.ndarray) -> np.ndarray:
        """Coordinates of stacked grids in the complement of the product span, one column each."""
        coords = self.v_ideal.complement.conj().T @ grids @ self.w_ideal.complement.conj()
        return coords.transpose(1, 2, 0).reshape(-1, grids.shape[0])

    def expand(self, coords: np.ndarray) -> np.ndarray:
        """Stacked grids of complement coordinates."""
        cells = coords.reshape(*self.shape, -1).transpose(2, 0, 1)
        return self.v_ideal.complement @ cells @ self.w_ideal.complement.T

    def solve(self, targets: list[NCPoly], tolerance: float) -> list[Certificate]:
        """Membership certificates for normal-ordered targets with this v-count."""
        if not targets:
            return []
        grids = np.stack([self.grid(t) for t in targets])
        coords = self.reduce(grids)
        if self.extras:
            extra, *_ = linalg.lstsq(self.extra_coords, coords, cond=LSTSQ_CUTOFF)
        else:
            extra = np.zeros((0, len(targets)), dtype=complex)
        distances = np.abs(self.expand(coords - self.extra_coords @ extra)).max(axis=(1, 2))

        extra_grids = np.stack([self.grid(poly) for *_, poly in self.extras]) if self.extras else None
        rest = grids if extra_grids is None else grids - np.einsum("kt,kab->tab", extra, extra_grids)
        count, rows, cols = rest.shape
        v_coeffs = self.v_ideal.coefficients(rest.transpose(1, 0, 2).reshape(rows, -1))
        remainder = rest - np.einsum(
            "ai,itb->tab", self.v_ideal.basis, v_coeffs.reshape(-1, count, cols)
        )
        w_coeffs = self.w_ideal.coefficients(remainder.transpose(2, 0, 1).reshape(cols, -1))

        v_words, w_words = list(self.v_ideal.words), list(self.w_ideal.words)
        certificates = []
        for t in range(count):
            terms = []
            for k, (left, label, right, poly) in enumerate(self.extras):
                terms.append((_generator_label(left, "", label, right), extra[k, t], poly))
            for i, (left, label, right, poly) in enumerate(self.v_ideal.placements):
                for b, word in enumerate(w_words):
                    coeff = v_coeffs[i, t * cols + b]
                    if abs(coeff) > ZERO_COEFFICIENT:
                        terms.append(
                            (
                                _generator_label(left, "v", label, right + word),
                                coeff,
                                poly * NCPoly.monomial(*word),
                            )
                        )
            for j, (left, label, right, poly) in enumerate(self.w_ideal.placements):
                for a, word in enumerate(v_words):
                    coeff = w_coeffs[j, t * rows + a]
                    if abs(coeff) > ZERO_COEFFICIENT:
                        terms.append(
                            (
                                _generator_label(word + left, "w", label, right),
                                coeff,
                                NCPoly.monomial(*word) * poly,
                            )
                        )
            terms = [term for term in terms if abs(term[1]) > ZERO_COEFFICIENT]
            distance = float(distances[t])
            certificates.append(
                Certificate(
                    member=distance <= tolerance,
                    distance=distance,
                    coefficients=tuple((label, complex(c)) for label, c, _ in terms),
                    generators=tuple(poly for *_, poly in terms),
                )
            )
        return certificates


def _merge(certificates: list[Certificate], tolerance: float) -> Certificate:
    distance = max((c.distance for c in certificates), default=0.0)
    return Certificate(
        member=distance <= tolerance,
        distance=distance,
        coefficients=tuple(pair for c in certificates for pair in c.coefficients),
        generators=tuple(g for c in certificates for g in c.generators),
    )


def ideal_membership(
    p: NCPoly,
    Rhat: RMat,  # pylint: disable=invalid-name
    max_degree: int = MAX_IDEAL_DEGREE,
    tolerance: float = DEFAULT_TOLERANCE,
) -> Certificate:
    """Decide whether ``p`` lies in the degree-bounded ideal of both plus relation sets."""
    if p.is_zero:
        return Certificate(True, 0.0)
    if not p.is_homogeneous():
        raise InputError("ideal membership needs a homogeneous polynomial")
    if p.degree > max_degree:
        raise DegreeOverflowError(p.degree, max_degree)
    rules = cross_relations(Rhat)
    target = straighten(rules, p)
    by_count = defaultdict(dict)
    for mono, coeff in target.terms.items():
        by_count[sum(s.family == "v" for s in mono)][mono] = coeff
    certificates = [
        _NormalFormSpan(Rhat, rules, p.degree, count).solve([NCPoly(terms)], tolerance)[0]
        for count, terms in sorted(by_count.items())
    ]
    return _merge(certificates, tolerance)


def homomorphism_defects(Rhat: RMat) -> list[NCPoly]:  # pylint: disable=invalid-name
    """Straightened ``R̂ (vw⊗vw) − (vw⊗vw) R̂₂₁`` entries, ordered by ``(p, q, l, m)``."""
    size = Rhat.N
    hat, hat21 = Rhat.entries, conventions(Rhat).rhat21
    vw = compose_generators(size)
    rules = cross_relations(Rhat)
    defects = []
    for p, q, l, m in product(range(size), repeat=4):
        defect = NCPoly()
        for j, k in product(range(size), repeat=2):
            if coeff := hat[p * size + q, j * size + k]:
                defect += coeff * (vw[j * size + l] * vw[k * size + m])
            if coeff := hat21[j * size + k, l * size + m]:
                defect -= coeff * (vw[p * size + j] * vw[q * size + k])
        defects.append(straighten(rules, defect))
    return defects


@dataclass(frozen=True)
class HomomorphismReport:
    """Whether the composed generators ``vw`` satisfy the plus relations."""

    residual: float
    """Max distance of a defect to the relation ideal."""
    braid_residual: float
    certificates: tuple[Certificate, ...]


def homomorphism_residual(
    Rhat: RMat, tolerance: float = DEFAULT_TOLERANCE  # pylint: disable=invalid-name
) -> HomomorphismReport:
    """Check that ``(v, w) ↦ vw`` maps the plus relations into the relation ideal."""
    braid = braid_residual(Rhat)
    span = _NormalFormSpan(Rhat, cross_relations(Rhat), 4, 2)
    certificates = tuple(span.solve(homomorphism_defects(Rhat), tolerance))
    residual = max((c.distance for c in certificates), default=0.0)
    LOGGER.debug("Homomorphism residual %.3g (braid %.3g)", residual, braid)
    return HomomorphismReport(residual, braid, certificates)


def straightening_consistency(Rhat: RMat) -> float:  # pylint: disable=invalid-name
    """Max distance of straightened ``ρ_w · v`` and ``w · ρ_v`` to ``v · ρ_w`` and ``ρ_v · w``."""
    rules = cross_relations(Rhat)
    v_words, w_words = _words("v", Rhat.N, 1), _words("w", Rhat.N, 1)
    v_ideal, w_ideal = _FamilyIdeal(Rhat, "v", 2), _FamilyIdeal(Rhat, "w", 2)

    def grids(polys: list[NCPoly], rows: dict, cols: dict, split: int) -> np.ndarray:
        values = np.zeros((len(polys), len(rows), len(cols)), dtype=complex)
        for k, poly in enumerate(polys):
            for mono, coeff in straighten(rules, poly).terms.items():
                values[k, rows[mono[:split]], cols[mono[split:]]] += coeff
        return values

    # rows of straightened ρ_w · v projected off V ⊗ I_w
    moved_w = grids(
        [rel * NCPoly.monomial(*v) for (_, rel), v in product(_FamilyIdeal.relations(Rhat, "w"), v_words)],
        v_words,
        w_ideal.words,
        1,
    )
    w_perp = w_ideal.complement
    first = moved_w @ w_perp.conj() @ w_perp.T
    # straightened w · ρ_v projected off I_v ⊗ W
    moved_v = grids(
        [NCPoly.monomial(*w) * rel for w, (_, rel) in product(w_words, _FamilyIdeal.relations(Rhat, "v"))],
        v_ideal.words,
        w_words,
        2,
    )
    v_perp = v_ideal.complement
    second = v_perp @ v_perp.conj().T @ moved_v
    worst = float(max(np.abs(first).max(initial=0.0), np.abs(second).max(initial=0.0)))
    LOGGER.log(VERBOSE, "Straightening consistency %.3g", worst)
    return worst
