import numpy as np
import pytest

from gaugecheck.catalog import SIGMA_1, SIGMA_2, SIGMA_3, X_PLUS
from gaugecheck.exceptions import (
    ClosureError,
    DimensionMismatchError,
    ElementLeavesAlgebraError,
    NotAntisymmetricError,
)
from gaugecheck.lie_tensor import (
    CoefTensor2,
    LieAlgebraRep,
    QuasitriangularSense,
    ad_invariance_residual,
    adjoint_action2,
    adjoint_action3,
    bracket,
    cybe,
    mixed_obstructions,
    quasitriangular_sense,
    split_sym_anti,
)
from gaugecheck.poisson_geom import GroupPoint
from gaugecheck.rmatrix import flip


def brute_force_cybe(t: CoefTensor2) -> np.ndarray:
    """``[W12, W13] + [W12, W23] + [W13, W23]`` with matrix commutators on V⊗V⊗V."""
    n = t.algebra.n
    eye = np.eye(n)
    swap23 = np.kron(eye, flip(n))
    w12 = np.kron(t.matrix, eye)
    w13 = swap23 @ w12 @ swap23
    w23 = np.kron(eye, t.matrix)

    def comm(x, y):
        return x @ y - y @ x

    return comm(w12, w13) + comm(w12, w23) + comm(w13, w23)


def random_antisymmetric(algebra: LieAlgebraRep, rng: np.random.Generator) -> CoefTensor2:
    coeffs = rng.uniform(-1, 1, (algebra.dim, algebra.dim))
    return CoefTensor2(algebra, coeffs - coeffs.T)


def test_pauli_structure_constants(su2):
    c = su2.algebra.structure_constants
    assert c[0, 1, 2] == pytest.approx(2j)
    assert c[1, 0, 2] == pytest.approx(-2j)
    assert np.allclose(bracket(su2.algebra, [1, 0, 0], [0, 1, 0]), [0, 0, 2j])


def test_expand_round_trips_elements(su2):
    assert np.allclose(su2.algebra.expand(X_PLUS), [0.5, 0.5j, 0])
    assert np.allclose(su2.algebra.element([0.5, 0.5j, 0]), X_PLUS)


def test_expand_rejects_non_members(su2):
    with pytest.raises(ElementLeavesAlgebraError) as err:
        su2.algebra.expand(np.eye(2))
    assert err.value.residual > 0.1


def test_basis_not_closed():
    with pytest.raises(ClosureError):
        LieAlgebraRep.from_basis([SIGMA_1, SIGMA_2])


def test_basis_linearly_dependent():
    with pytest.raises(ClosureError):
        LieAlgebraRep.from_basis([SIGMA_1, SIGMA_2, SIGMA_3, 2 * SIGMA_3])


def test_bad_basis_shape():
    with pytest.raises(DimensionMismatchError):
        LieAlgebraRep.from_basis(np.zeros((2, 2, 3)))


def test_tensor_shape_checked(su2):
    with pytest.raises(DimensionMismatchError):
        CoefTensor2(su2.algebra, np.zeros((2, 2)))


def test_require_antisymmetric(su2):
    su2.tensors["r"].require_antisymmetric()
    with pytest.raises(NotAntisymmetricError):
        su2.tensors["s"].require_antisymmetric()


def test_cybe_su2(su2):
    assert cybe(su2.algebra, su2.tensors["w"]).max_abs() <= 1e-12
    assert cybe(su2.algebra, su2.tensors["r"]).max_abs() > 0.1


def test_cybe_sl2(sl2):
    assert cybe(sl2.algebra, sl2.tensors["w_DJ"]).max_abs() <= 1e-12
    assert cybe(sl2.algebra, sl2.tensors["r_a"]).max_abs() > 0.1


@pytest.mark.parametrize("name", ["su2", "sl2"])
def test_cybe_matches_matrix_commutators(name, request, rng):
    entry = request.getfixturevalue(name)
    tensors = list(entry.tensors.values())
    tensors.append(CoefTensor2(entry.algebra, rng.uniform(-1, 1, (3, 3))))
    for t in tensors:
        production = cybe(entry.algebra, t).matrix
        assert np.max(np.abs(production - brute_force_cybe(t))) <= 1e-12


def test_invariance(su2, sl2):
    assert ad_invariance_residual(su2.algebra, su2.tensors["s"]) <= 1e-12
    assert ad_invariance_residual(sl2.algebra, sl2.tensors["s_real"]) <= 1e-12
    sigma11 = CoefTensor2.tensor(su2.algebra, [1, 0, 0], [1, 0, 0])
    assert ad_invariance_residual(su2.algebra, sigma11) > 1


def test_split_sym_anti(sl2):
    sym, anti = split_sym_anti(sl2.tensors["w_DJ"])
    assert np.allclose(sym.coeffs, sl2.tensors["s_real"].coeffs)
    assert np.allclose(anti.coeffs, sl2.tensors["r_a"].coeffs)


def test_adjoint_action_preserves_invariant(sl2, rng):
    s = sl2.tensors["s_real"]
    g = GroupPoint.random(sl2.algebra, rng)
    assert np.allclose(adjoint_action2(sl2.algebra, g, s).coeffs, s.coeffs)


def test_cybe_is_equivariant(sl2, rng):
    alg = sl2.algebra
    w = CoefTensor2(alg, rng.uniform(-1, 1, (3, 3)))
    g = GroupPoint.random(alg, rng)
    moved = cybe(alg, adjoint_action2(alg, g, w))
    expected = adjoint_action3(alg, g, cybe(alg, w))
    assert np.allclose(moved.coeffs, expected.coeffs, atol=1e-9)


def _solutions(su2, sl2, rng, count):
    """Rescaled conjugates of the catalog solutions, alternating su(2) and sl(2, R)."""
    for index in range(count):
        scale = rng.uniform(0.2, 2.0)
        if index % 2:
            g = GroupPoint.exp(sl2.algebra, rng.uniform(-1, 1, 3))
            yield sl2.algebra, scale * adjoint_action2(sl2.algebra, g, sl2.tensors["w_DJ"])
        else:
            g = GroupPoint.exp(su2.algebra, 1j * rng.uniform(-1, 1, 3))
            yield su2.algebra, scale * adjoint_action2(su2.algebra, g, su2.tensors["w"])


def _non_solutions(su2, sl2, rng, count):
    """Random r plus a multiple of the invariant."""
    for index in range(count):
        entry, s_name, factor = (sl2, "s_real", 1.0) if index % 2 else (su2, "s", -1j)
        r = random_antisymmetric(entry.algebra, rng)
        yield entry.algebra, r + factor * rng.uniform(0.2, 2.0) * entry.tensors[s_name]


def test_obstructions_equivalent_to_cybe(su2, sl2, rng):
    instances = list(_solutions(su2, sl2, rng, 60)) + list(_non_solutions(su2, sl2, rng, 60))
    solved = 0
    for alg, w in instances:
        sym, r = split_sym_anti(w)
        assert ad_invariance_residual(alg, sym) <= 1e-9
        first, second = mixed_obstructions(alg, r, w)
        obstructions_vanish = first.is_zero(1e-10) and second.is_zero(1e-10)
        is_solution = cybe(alg, w).is_zero(1e-10)
        assert obstructions_vanish == is_solution
        solved += is_solution
    assert solved == 60


def test_quasitriangular_sense(su2, sl2):
    assert quasitriangular_sense(su2.tensors["w"]) is QuasitriangularSense.IMAGINARY
    assert quasitriangular_sense(sl2.tensors["w_DJ"]) is QuasitriangularSense.REAL
    mixed = sl2.tensors["r_a"] + (1 + 0.3j) * sl2.tensors["s_real"]
    assert quasitriangular_sense(mixed) is QuasitriangularSense.MIXED


def test_tensor_matrix_of_wedge(su2):
    r = su2.tensors["r"]
    expected = 0.5 * (np.kron(SIGMA_1, SIGMA_2) - np.kron(SIGMA_2, SIGMA_1))
    assert np.allclose(r.matrix, expected)
    assert np.allclose(r.transposed.coeffs, -r.coeffs)


@pytest.mark.parametrize("name", ["su2", "sl2"])
def test_bracket_antisymmetric(name, request, rng):
    alg = request.getfixturevalue(name).algebra
    for _ in range(20):
        x = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        y = rng.uniform(-1, 1, 3) + 1j * rng.uniform(-1, 1, 3)
        assert np.allclose(bracket(alg, x, y), -bracket(alg, y, x), atol=1e-14)
    assert not bracket(alg, [1, 0, 0], [1, 0, 0]).any()


def test_bracket_pauli_examples(su2):
    assert np.allclose(bracket(su2.algebra, [0, 0, 1], [1, 0, 0]), [0, 2j, 0])
    with pytest.raises(DimensionMismatchError):
        bracket(su2.algebra, [1, 0], [0, 1, 0])


def test_cybe_is_quadratic(su2, rng):
    w = CoefTensor2(su2.algebra, rng.uniform(-1, 1, (3, 3)))
    scale = 1.7 - 0.4j
    scaled = cybe(su2.algebra, scale * w).coeffs
    assert np.allclose(scaled, scale**2 * cybe(su2.algebra, w).coeffs, atol=1e-12)


@pytest.mark.parametrize("unitary", [True, False])
def test_cybe_is_equivariant_su2(su2, rng, unitary):
    alg = su2.algebra
    w = CoefTensor2(alg, rng.uniform(-1, 1, (3, 3)) + 1j * rng.uniform(-1, 1, (3, 3)))
    coeffs = rng.uniform(-1, 1, 3)
    g = GroupPoint.exp(alg, 1j * coeffs if unitary else coeffs)
    moved = cybe(alg, adjoint_action2(alg, g, w))
    expected = adjoint_action3(alg, g, cybe(alg, w))
    assert np.allclose(moved.coeffs, expected.coeffs, atol=1e-9)


def test_adjoint_action_unitary_keeps_casimir(su2, rng):
    s = su2.tensors["s"]
    for _ in range(5):
        g = GroupPoint.exp(su2.algebra, 1j * rng.uniform(-1, 1, 3))
        assert np.allclose(g.matrix @ g.matrix.conj().T, np.eye(2))
        assert np.allclose(adjoint_action2(su2.algebra, g, s).coeffs, s.coeffs, atol=1e-12)


def test_adjoint_action_identity(su2):
    w = su2.tensors["w"]
    assert np.allclose(adjoint_action2(su2.algebra, np.eye(2), w).coeffs, w.coeffs)


def test_adjoint_action_diagonal_fixes_sigma3(su2):
    sigma33 = CoefTensor2.tensor(su2.algebra, [0, 0, 1], [0, 0, 1])
    g = np.diag([3.0, 1 / 3.0])
    assert np.allclose(adjoint_action2(su2.algebra, g, sigma33).coeffs, sigma33.coeffs)


def test_adjoint_action_leaves_algebra():
    cartan = LieAlgebraRep.from_basis([SIGMA_3])
    t = CoefTensor2(cartan, [[1.0]])
    with pytest.raises(ElementLeavesAlgebraError):
        adjoint_action2(cartan, np.array([[1.0, 1.0], [0.0, 1.0]]), t)
