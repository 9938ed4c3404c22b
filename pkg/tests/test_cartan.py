import random
from fractions import Fraction

import pytest

from bkm_weights.cartan import (
    BkmCartanMatrix,
    NodeType,
    RootSum,
    WeylWord,
    grades_up_to,
    negative_type_a,
    parse_matrix,
    parse_weight,
    rank2,
    validate_matrix,
)
from bkm_weights.errors import InvalidInput, NotSymmetrizable, RejectNotBkm
from bkm_weights.solver import QuadraticInstance
from bkm_weights.verify import random_matrix, random_weight


def test_node_types(mixed):
    assert mixed.node_types == (NodeType.REAL, NodeType.NEGATIVE)
    assert mixed.describe()["types"] == ["Real", "Negative"]
    assert validate_matrix([[0, -1], [-1, -2]]).node_types == (NodeType.HEISENBERG, NodeType.NEGATIVE)


@pytest.mark.parametrize(
    "raw, rule",
    [
        ([[3]], "diagonal"),
        ([[2, 1], [-1, 2]], "off-diagonal"),
        ([[2, "-1/2"], [-1, -2]], "real-row-integral"),
        ([[-2, 0], [-1, -2]], "zero-symmetric"),
        ([[2, -1]], "square"),
        ([], "square"),
    ],
)
def test_rejects_with_rule(raw, rule):
    with pytest.raises(RejectNotBkm) as e:
        validate_matrix(raw)
    assert e.value.rule == rule
    assert e.value.exit_code == 2


def test_rational_entries_accepted():
    A = validate_matrix([["-1/2", -1], [-1, -2]])
    assert A.diag(0) == Fraction(-1, 2)
    assert A.node_types[0] is NodeType.NEGATIVE


def test_symmetrizer():
    A = validate_matrix([[-2, -1], [-2, -2]])
    d = A.symmetrizer
    assert d[0] * A[0, 1] == d[1] * A[1, 0]
    assert min(d) == 1


def test_not_symmetrizable():
    A = validate_matrix([[-2, -1, -1], [-2, -2, -1], [-1, -1, -2]])
    assert not A.is_symmetrizable
    assert A.describe()["symmetrizer"] is None
    with pytest.raises(NotSymmetrizable):
        A.bilinear_form((1, 0, 0), (0, 1, 0))


def test_weyl_vector_and_residual(free_rank2, a2):
    assert a2.weyl_vector().pairings == (-1, -1)
    rho = free_rank2.weyl_vector()
    assert free_rank2.bilinear_residual(rho, (1, 1)) == 0
    assert free_rank2.bilinear_residual(rho, (2, 0)) == 0
    assert a2.bilinear_residual(a2.weyl_vector(), (1, 1)) == -2


def test_residual_is_zero_at_zero(mixed):
    lam = mixed.weight([3, "-5/2"])
    assert mixed.bilinear_residual(lam, (0, 0)) == 0


def test_cone_membership(mixed):
    cone = mixed.cone_membership(mixed.weight([0, -1]))
    assert cone.J_lambda == frozenset({0, 1})
    assert cone.powers == {0: 1, 1: 2}
    assert cone.in_P_pm
    assert not cone.in_P_plus

    cone = mixed.cone_membership(mixed.weight([1, 1]))
    assert cone.J_lambda == frozenset({0})
    assert cone.in_P_plus
    assert not cone.in_P_pm


def test_heisenberg_cone():
    A = validate_matrix([[0]])
    assert A.cone_membership(A.weight([0])).powers == {0: 1}
    assert A.cone_membership(A.weight([1])).J_lambda == frozenset()


def test_reflections(sl3):
    lam = sl3.weight([1, 0])
    assert sl3.reflect_weight(0, lam).pairings == (-1, 1)
    assert sl3.reflect_root(0, (1, 0)) == (-1, 0)
    assert sl3.reflect_root(0, (0, 1)) == (1, 1)
    assert sl3.dot_reflect(0, sl3.weight([0, 0])).pairings == (-2, 1)


def test_reflection_needs_real_node(mixed):
    with pytest.raises(InvalidInput):
        mixed.reflect_weight(1, mixed.weight([0, 0]))


def test_reflection_preserves_form(sl3):
    for beta in [(1, 0), (1, 1), (2, 1)]:
        image = sl3.reflect_root(1, beta)
        assert sl3.bilinear_form(image, image) == sl3.bilinear_form(beta, beta)


def test_weyl_word_applies_right_to_left(sl3):
    lam = sl3.weight([1, 0])
    w = WeylWord([0, 1]).validate(sl3)
    assert w.apply(sl3, lam) == sl3.reflect_weight(0, sl3.reflect_weight(1, lam))
    assert w.apply_root(sl3, (0, 1)) == sl3.reflect_root(0, sl3.reflect_root(1, (0, 1)))
    with pytest.raises(InvalidInput):
        WeylWord([0, 1]).validate(rank2(1, 1))


def test_independence(a3):
    assert a3.is_independent([0, 2])
    assert not a3.is_independent([0, 1])
    assert a3.dynkin_components([0, 2]) == [(0,), (2,)]
    assert a3.dynkin_components([0, 1, 2]) == [(0, 1, 2)]
    assert a3.is_connected_support((1, 1, 0))
    assert not a3.is_connected_support((1, 0, 1))


def test_constructors():
    assert negative_type_a(3).entries == ((-2, -1, 0), (-1, -2, -1), (0, -1, -2))
    assert rank2(4, 1).entries == ((-4, -1), (-1, -4))
    assert rank2(2, 1, 3, 5).entries == ((-2, -1), (-3, -5))


def test_grades_up_to_order():
    assert grades_up_to(2, 2) == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert grades_up_to(3, 2, 2)[0] == (0, 0, 2)


def test_root_sum():
    beta = RootSum([1, 0, 2])
    assert beta.height == 3
    assert beta.support == frozenset({0, 2})
    assert beta.dominated_by((1, 1, 2))
    with pytest.raises(InvalidInput):
        RootSum([1, -1])
    assert beta.minus((1, 0, 1)) == RootSum([0, 0, 1])
    with pytest.raises(InvalidInput):
        beta.minus((0, 1, 0))


def test_parse_inputs(mixed):
    assert parse_matrix("[[2,-1],[-1,-2]]") == mixed
    assert parse_weight("rho", mixed).pairings == (1, -1)
    assert parse_weight([0, "-1/2"], mixed).pairings == (0, Fraction(-1, 2))
    assert parse_weight("0", mixed).pairings == (0, 0)
    with pytest.raises(InvalidInput):
        parse_weight([1], mixed)
    with pytest.raises(InvalidInput):
        parse_weight([0.5, 0], mixed)


def test_matrix_hash_is_canonical():
    a = validate_matrix([[-2, -1], [-1, -2]])
    b = validate_matrix([["-2", "-1"], ["-1", "-2"]])
    assert a.matrix_hash() == b.matrix_hash()
    assert a.matrix_hash() != rank2(1, 1).matrix_hash()


def test_from_raw_and_fundamental_weight():
    A = BkmCartanMatrix.from_raw([[2, "-1"], [-1, "-2"]], labels=["a", "b"])
    assert A.labels == ("a", "b")
    assert A.entries == ((2, -1), (-1, -2))
    w = A.fundamental_weight(1)
    assert w.pairings == (0, 1)
    assert A.cone_membership(A.weight([0, -1])).in_P_pm


# random instances


def random_rank2_norm_case(rng):
    """A rank-2 matrix whose node types give one of the N, H, R norm equations."""
    diag = [rng.choice([-1, -2, -3, -4]), rng.choice([-1, -2, -3, 0, 2])]
    rng.shuffle(diag)
    p, q = rng.choice([(1, 1), (1, 2), (2, 1), (2, 3), (3, 3), (0, 0)])
    A = validate_matrix([[diag[0], -p], [-q, diag[1]]])
    lam = A.weight([Fraction(rng.randint(-6, 6), rng.choice([1, 2, 3])) for _ in range(2)])
    return A, lam


def test_subtract_roots_is_additive():
    rng = random.Random(7)
    for _ in range(50):
        A = random_matrix(rng, rng.randint(1, 4))
        lam = random_weight(rng, A)
        beta = tuple(rng.randint(0, 3) for _ in range(A.n))
        gamma = tuple(rng.randint(0, 3) for _ in range(A.n))
        total = tuple(b + g for b, g in zip(beta, gamma))
        assert A.subtract_roots(A.subtract_roots(lam, beta), gamma) == A.subtract_roots(lam, total)
        assert A.subtract_roots(lam, (0,) * A.n) == lam


def test_residual_is_the_norm_equation():
    rng = random.Random(11)
    seen = set()
    for _ in range(100):
        A, lam = random_rank2_norm_case(rng)
        inst = QuadraticInstance.from_weight(A, lam)
        seen.add(inst.variant)
        X, Y = rng.randint(0, 8), rng.randint(0, 8)
        assert A.bilinear_residual(lam, (X, Y)) == inst.value(X, Y)
    assert seen == {"N", "H", "R"}


def test_rho_is_in_the_cone():
    rng = random.Random(13)
    for _ in range(50):
        A = random_matrix(rng, rng.randint(1, 5))
        cone = A.cone_membership(A.weyl_vector())
        assert cone.in_P_pm
        assert cone.J_lambda == frozenset(range(A.n))
        assert all(cone.powers[i] == (1 if A.diag(i) == 0 else 2) for i in range(A.n))


def test_dynkin_components_partition():
    rng = random.Random(17)
    for _ in range(50):
        A = random_matrix(rng, rng.randint(1, 6))
        S = {i for i in range(A.n) if rng.random() < 0.7}
        comps = A.dynkin_components(S)
        flat = [i for comp in comps for i in comp]
        assert sorted(flat) == sorted(S)
        assert len(flat) == len(set(flat))
        for k, comp in enumerate(comps):
            assert A.dynkin_components(comp) == [comp]
            for other in comps[k + 1:]:
                assert not any(A.adjacent(i, j) for i in comp for j in other)
        assert A.is_independent(S) == (len(comps) == len(S))
