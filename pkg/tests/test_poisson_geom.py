from itertools import product

import numpy as np
import pytest

from gaugecheck.exceptions import InputError, NotAntisymmetricError, SingularMatrixError
from gaugecheck.lie_tensor import CoefTensor2, adjoint_action2, mixed_obstructions, split_sym_anti
from gaugecheck.poisson_geom import (
    GroupPoint,
    TwoLinkSpec,
    assemble_two_link,
    bracket_cross,
    bracket_plus,
    bracket_sklyanin,
    is_real_tensor,
    jacobi_residual,
    jacobian_error,
    map_multiply,
    map_one_link,
    map_two_link,
    multiplication_residual,
    one_link_residual,
    phi_condition_check,
    poisson_map_residual,
    pushforward_formula_check,
    sample_points,
    two_link_residual,
    two_link_source,
)


@pytest.fixture(name="points50", scope="module")
def fifty_points(sl2):
    return sample_points(sl2.algebra, 50, seed=7)


def test_group_point_validation():
    with pytest.raises(InputError):
        GroupPoint(np.zeros((2, 3)))
    with pytest.raises(SingularMatrixError):
        GroupPoint(np.zeros((2, 2)))


def test_sample_points_deterministic(sl2):
    first = sample_points(sl2.algebra, 3, seed=11)
    second = sample_points(sl2.algebra, 3, seed=11)
    other = sample_points(sl2.algebra, 3, seed=12)
    for p, q in zip(first, second):
        for x, y in zip(p, q):
            assert np.array_equal(x.matrix, y.matrix)
    assert not np.allclose(first[0][0].matrix, other[0][0].matrix)


def test_brackets_at_identity_vanish(sl2):
    e = GroupPoint.identity(2)
    assert bracket_sklyanin(sl2.algebra, sl2.tensors["r_a"], e).max_abs() == 0
    assert bracket_plus(sl2.algebra, sl2.tensors["r_a"], e).max_abs() > 0


def test_brackets_antisymmetric(sl2, rng):
    g = GroupPoint.random(sl2.algebra, rng)
    r = sl2.tensors["r_a"]
    assert bracket_sklyanin(sl2.algebra, r, g).antisymmetry_residual() <= 1e-12
    assert bracket_plus(sl2.algebra, r, g).antisymmetry_residual() <= 1e-12


def test_symmetric_r_rejected(sl2):
    with pytest.raises(NotAntisymmetricError):
        TwoLinkSpec.with_constant_phi(sl2.algebra, sl2.tensors["s_real"], sl2.tensors["w_DJ"])


@pytest.mark.parametrize("arity, map_op", [(3, map_one_link), (3, map_two_link), (2, map_multiply)])
def test_analytic_jacobians(sl2, arity, map_op):
    for point in sample_points(sl2.algebra, 20, arity, seed=3):
        assert jacobian_error(map_op, point) <= 1e-6


def test_one_link_map(sl2, points50):
    assert one_link_residual(sl2.algebra, sl2.tensors["r_a"], points50) <= 1e-8


def test_two_link_map(sl2, points50):
    alg, r_a, w_dj = sl2.algebra, sl2.tensors["r_a"], sl2.tensors["w_DJ"]
    good = TwoLinkSpec.with_constant_phi(alg, r_a, -w_dj)
    assert two_link_residual(good, points50) <= 1e-8

    bad = TwoLinkSpec.with_constant_phi(alg, r_a, -2 * w_dj)
    source = two_link_source(bad)
    target = lambda a, b: assemble_two_link(bad, a, b)  # noqa: E731
    failures = sum(
        poisson_map_residual(source, map_two_link, target, p) > 1e-3 for p in points50
    )
    assert failures >= 45


def test_two_link_source_carries_cross_blocks(sl2, rng):
    link = TwoLinkSpec.with_constant_phi(sl2.algebra, sl2.tensors["r_a"], -sl2.tensors["w_DJ"])
    a, g, b = (GroupPoint.random(sl2.algebra, rng) for _ in range(3))
    entries = two_link_source(link)(a, g, b).entries
    pair = assemble_two_link(link, a, b).entries
    assert entries.shape == (12, 12)
    assert np.allclose(entries[0:4, 8:12], pair[0:4, 4:8])
    assert np.allclose(entries[8:12, 0:4], pair[4:8, 0:4])
    assert np.allclose(entries[4:8, 4:8], bracket_sklyanin(sl2.algebra, link.r, g).entries)
    assert not entries[0:4, 4:8].any()
    assert np.abs(entries[0:4, 8:12]).max() > 1e-3


def test_two_link_map_non_constant(sl2, points50):
    link = TwoLinkSpec.with_ad_b_f(sl2.algebra, sl2.tensors["r_a"], sl2.tensors["w_DJ"])
    assert two_link_residual(link, points50) <= 1e-8


def test_phi_condition_constant(sl2, points50):
    link = TwoLinkSpec.with_constant_phi(sl2.algebra, sl2.tensors["r_a"], -sl2.tensors["w_DJ"])
    result = phi_condition_check(link, points50, 1e-8)
    assert result.passed
    assert result.residual <= 1e-8


def test_phi_condition_non_constant(sl2, points50):
    link = TwoLinkSpec.with_ad_b_f(sl2.algebra, sl2.tensors["r_a"], sl2.tensors["w_DJ"])
    assert not link.constant
    result = phi_condition_check(link, points50, 1e-8)
    assert result.cocycle_residual <= 1e-8
    assert result.map_residual <= 1e-8
    assert result.passed


def test_phi_condition_fails_off_cocycle(sl2, points50):
    link = TwoLinkSpec.with_constant_phi(
        sl2.algebra, sl2.tensors["r_a"], -2 * sl2.tensors["w_DJ"]
    )
    result = phi_condition_check(link, points50, 1e-8)
    assert not result.passed
    assert result.cocycle_residual > 1e-3


@pytest.mark.parametrize("symmetric", [0.0, -1.0, 0.7])
def test_multiplication_ignores_symmetric_part(sl2, symmetric):
    alg, r_a, s = sl2.algebra, sl2.tensors["r_a"], sl2.tensors["s_real"]
    link = TwoLinkSpec.with_constant_phi(alg, r_a, -r_a + symmetric * s)
    assert multiplication_residual(link, sample_points(alg, 20, 2, seed=5)) <= 1e-8


def test_multiplication_needs_minus_r(sl2):
    alg, r_a = sl2.algebra, sl2.tensors["r_a"]
    link = TwoLinkSpec.with_constant_phi(alg, r_a, -2 * r_a)
    assert multiplication_residual(link, sample_points(alg, 20, 2, seed=5)) > 1e-3


def test_jacobi_constant_case(sl2):
    alg = sl2.algebra
    points = sample_points(alg, 4, 2, seed=9)
    good = TwoLinkSpec.with_constant_phi(alg, sl2.tensors["r_a"], -sl2.tensors["w_DJ"])
    assert jacobi_residual(good, points) <= 1e-4
    bad = TwoLinkSpec.with_constant_phi(alg, sl2.tensors["r_a"], -sl2.tensors["r_a"])
    assert jacobi_residual(bad, points) > 1e-2


def test_jacobi_agrees_with_obstructions(sl2, rng):
    alg = sl2.algebra
    points = sample_points(alg, 3, 2, seed=13)
    candidates = [
        adjoint_action2(alg, GroupPoint.random(alg, rng), sl2.tensors["w_DJ"]),
        0.5 * sl2.tensors["w_DJ"],
        sl2.tensors["r_a"] + 0.5 * sl2.tensors["s_real"],
    ]
    for w in candidates:
        _, r = split_sym_anti(w)
        first, second = mixed_obstructions(alg, r, w)
        algebraic = first.is_zero(1e-10) and second.is_zero(1e-10)
        link = TwoLinkSpec.with_constant_phi(alg, r, -w)
        assert (jacobi_residual(link, points) <= 1e-4) == algebraic


def test_jacobi_requires_constant(sl2):
    link = TwoLinkSpec.with_ad_b_f(sl2.algebra, sl2.tensors["r_a"], sl2.tensors["w_DJ"])
    with pytest.raises(InputError):
        jacobi_residual(link, sample_points(sl2.algebra, 1, 2))


@pytest.mark.parametrize("side", ["right", "left"])
def test_pushforward_formula(sl2, points50, side):
    for a, g, b in points50:
        assert pushforward_formula_check(sl2.algebra, sl2.tensors["r_a"], a, g, b, side) <= 1e-8


def test_pushforward_formula_complex(su2):
    for a, g, b in sample_points(su2.algebra, 10, seed=17):
        assert pushforward_formula_check(su2.algebra, su2.tensors["r"], a, g, b) <= 1e-8


def test_pushforward_side_checked(sl2):
    e = GroupPoint.identity(2)
    with pytest.raises(InputError):
        pushforward_formula_check(sl2.algebra, sl2.tensors["r_a"], e, e, e, side="up")


def test_two_link_table_shape(sl2, rng):
    link = TwoLinkSpec.with_constant_phi(sl2.algebra, sl2.tensors["r_a"], -sl2.tensors["w_DJ"])
    a, b = (GroupPoint.random(sl2.algebra, rng) for _ in range(2))
    table = assemble_two_link(link, a, b)
    assert table.entries.shape == (8, 8)
    assert table.antisymmetry_residual() <= 1e-12


def test_is_real_tensor(su2, sl2):
    assert is_real_tensor(sl2.tensors["w_DJ"])
    assert not is_real_tensor(su2.tensors["w"])


def summed_table(r, left_right_pairs) -> np.ndarray:
    """``Σ_mn r^{mn} Σ_(sign, f1, f2) sign·f1(X_m)_{ij}·f2(X_n)_{kl}`` entry by entry."""
    basis = r.algebra.basis
    n, d = r.algebra.n, r.algebra.dim
    table = np.zeros((n * n, n * n), dtype=complex)
    for i, j, k, l in product(range(n), repeat=4):
        total = 0j
        for m, p in product(range(d), repeat=2):
            for sign, first, second in left_right_pairs:
                total += sign * r.coeffs[m, p] * first(basis[m])[i, j] * second(basis[p])[k, l]
        table[i * n + j, k * n + l] = total
    return table


def random_antisymmetric(algebra, rng) -> CoefTensor2:
    coeffs = rng.uniform(-1, 1, (algebra.dim, algebra.dim))
    return CoefTensor2(algebra, coeffs - coeffs.T)


def test_sklyanin_and_plus_by_summation(su2):
    r = su2.tensors["r"]
    g = GroupPoint(np.diag([2.0, 0.5]))
    right = lambda x: x @ g.matrix  # noqa: E731
    left = lambda x: g.matrix @ x  # noqa: E731
    sklyanin = summed_table(r, [(1, right, right), (-1, left, left)])
    plus = summed_table(r, [(1, right, right), (1, left, left)])
    assert np.max(np.abs(bracket_sklyanin(su2.algebra, r, g).entries - sklyanin)) <= 1e-12
    assert np.max(np.abs(bracket_plus(su2.algebra, r, g).entries - plus)) <= 1e-12


def test_plus_at_random_unitary(su2, rng):
    r = su2.tensors["r"]
    g = GroupPoint.exp(su2.algebra, 1j * rng.uniform(-1, 1, 3))
    right = lambda x: x @ g.matrix  # noqa: E731
    left = lambda x: g.matrix @ x  # noqa: E731
    plus = summed_table(r, [(1, right, right), (1, left, left)])
    assert np.max(np.abs(bracket_plus(su2.algebra, r, g).entries - plus)) <= 1e-12


def test_bracket_cross_examples(su2, rng):
    alg = su2.algebra
    a, b = (GroupPoint.random(alg, rng) for _ in range(2))
    assert bracket_cross(alg, CoefTensor2.zero(alg), a, b).max_abs() == 0

    phi = -su2.tensors["w"]
    e = GroupPoint.identity(2)
    at_unit = summed_table(phi, [(1, lambda x: x, lambda x: x)])
    assert np.max(np.abs(bracket_cross(alg, phi, e, e).entries - at_unit)) <= 1e-12

    expected = summed_table(phi, [(1, lambda x: a.matrix @ x, lambda x: x @ b.matrix)])
    assert np.max(np.abs(bracket_cross(alg, phi, a, b).entries - expected)) <= 1e-12


def test_brackets_linear(sl2, rng):
    alg = sl2.algebra
    g, a, b = (GroupPoint.random(alg, rng) for _ in range(3))
    r1, r2 = random_antisymmetric(alg, rng), random_antisymmetric(alg, rng)
    alpha, beta = 0.7, -1.3
    for table in (bracket_sklyanin, bracket_plus):
        combined = table(alg, alpha * r1 + beta * r2, g).entries
        separate = alpha * table(alg, r1, g).entries + beta * table(alg, r2, g).entries
        assert np.allclose(combined, separate, atol=1e-12)
    phi1 = CoefTensor2(alg, rng.uniform(-1, 1, (3, 3)))
    phi2 = CoefTensor2(alg, rng.uniform(-1, 1, (3, 3)))
    combined = bracket_cross(alg, alpha * phi1 + beta * phi2, a, b).entries
    separate = (
        alpha * bracket_cross(alg, phi1, a, b).entries
        + beta * bracket_cross(alg, phi2, a, b).entries
    )
    assert np.allclose(combined, separate, atol=1e-12)


def test_two_link_table_without_phi(sl2, rng):
    alg, r = sl2.algebra, sl2.tensors["r_a"]
    link = TwoLinkSpec.with_constant_phi(alg, r, CoefTensor2.zero(alg))
    a, b = (GroupPoint.random(alg, rng) for _ in range(2))
    table = assemble_two_link(link, a, b).entries
    assert not table[0:4, 4:8].any()
    assert not table[4:8, 0:4].any()
    assert np.allclose(table[0:4, 0:4], bracket_plus(alg, r, a).entries)
    assert np.allclose(table[4:8, 4:8], bracket_plus(alg, r, b).entries)
