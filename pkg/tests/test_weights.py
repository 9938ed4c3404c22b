import random

import pytest

from bkm_weights.cartan import NodeType, grades_up_to, height, validate_matrix
from bkm_weights.errors import InvalidHole, InvalidInput, NonIntegralDifference
from bkm_weights.lie_engine import QuotientModel, build_verma, quotient_multiplicities
from bkm_weights.verify import random_hole_set, random_matrix, random_weight
from bkm_weights.weights import (
    Hole,
    HoleSet,
    free_directions,
    independent_weight_in_wtV,
    minkowski_check,
    simple_weight_formula,
    thmA_enumerate,
    thmA_membership,
    thmB_first_formula,
    thmB_weights,
)


def oracle_support(hs, cutoff):
    return QuotientModel(build_verma(hs.A, hs.lam, cutoff), hs).support(cutoff)


# holes


def test_hole_order():
    small, big = Hole({0: 2}), Hole({0: 2, 2: 2})
    assert small.precedes(big)
    assert not big.precedes(small)
    assert big.grade(3) == (2, 0, 2)
    assert big.height == 4
    assert Hole.from_dict(big.to_dict()) == big


def test_for_simple_holes(mixed):
    hs = HoleSet.for_simple(mixed, mixed.weight([0, -1]))
    assert hs.grades() == [(1, 0), (0, 2)]
    assert hs.is_nice()
    assert hs.integrable_nodes() == frozenset({0})
    assert hs.J_V == frozenset({0, 1})


@pytest.mark.parametrize(
    "holes",
    [
        [Hole({0: 1, 1: 1})],
        [Hole({1: 3})],
        [Hole({})],
    ],
)
def test_invalid_holes(a3, holes):
    # over A(3) at ρ every power is 2 and {0,1} is not independent
    with pytest.raises(InvalidHole):
        HoleSet(a3, a3.weyl_vector(), holes)


def test_hole_outside_j_lambda(mixed):
    with pytest.raises(InvalidHole):
        HoleSet(mixed, mixed.weight([-1, 0]), [Hole({0: 1})])


def test_minimal_and_upper_closure(a3):
    hs = HoleSet(a3, a3.weyl_vector(), [Hole({0: 2}), Hole({0: 2, 2: 2})])
    assert hs.minimal().holes == frozenset({Hole({0: 2})})
    assert hs.upper_closure_contains(Hole({0: 2, 2: 2}))
    assert not hs.upper_closure_contains(Hole({2: 2}))


def test_non_holes(a3):
    hs = HoleSet(a3, a3.weyl_vector(), [Hole({0: 2, 2: 2})])
    non = hs.non_holes(4)
    assert Hole({}) in non
    assert Hole({0: 2}) in non
    assert Hole({0: 2, 2: 2}) not in non


# independent weights


def test_independent_weight(a3):
    hs = HoleSet(a3, a3.weyl_vector(), [Hole({0: 2, 2: 2})])
    assert independent_weight_in_wtV(hs, (2, 0, 1))
    assert not independent_weight_in_wtV(hs, (3, 0, 2))
    with pytest.raises(InvalidInput):
        independent_weight_in_wtV(hs, (1, 1, 0))
    with pytest.raises(NonIntegralDifference):
        independent_weight_in_wtV(hs, ("1/2", 0, 0))


# closed forms


def test_sl2_simple_weights(sl2):
    hs = HoleSet.for_simple(sl2, sl2.weight([1]))
    assert thmA_enumerate(hs, 4) == [(0,), (1,)]
    assert thmA_membership(hs, (1,))
    assert not thmA_membership(hs, (2,))


@pytest.mark.parametrize(
    "diag, lam, expected",
    [(-2, -1, [(0,), (1,)]), (-2, 1, [(k,) for k in range(5)]), (0, 0, [(0,)]), (0, 1, [(k,) for k in range(5)])],
)
def test_rank1_imaginary(diag, lam, expected):
    A = validate_matrix([[diag]])
    hs = HoleSet.for_simple(A, A.weight([lam]))
    assert thmA_enumerate(hs, 4) == expected
    assert simple_weight_formula(A, A.weight([lam]), 4) == expected


def test_slice_example(mixed):
    lam = mixed.weight([0, -1])
    ray = [g for g in simple_weight_formula(mixed, lam, 6) if g[0] == 0]
    assert ray == [(0, 0), (0, 1)]


def test_free_ray():
    A = validate_matrix([[-2, -1], [-1, -2]])
    lam = A.weight([1, 0])
    assert free_directions(A, lam) == [0]
    ray = [g for g in simple_weight_formula(A, lam, 8) if g[1] == 0]
    assert ray == [(k, 0) for k in range(9)]


def test_simple_formula_matches_holes_of_simple(a3):
    lam = a3.weyl_vector()
    hs = HoleSet.for_simple(a3, lam)
    assert simple_weight_formula(a3, lam, 5) == thmA_enumerate(hs, 5)


def test_thmA_against_engine(a3):
    hs = HoleSet(a3, a3.weyl_vector(), [Hole({0: 2, 2: 2}), Hole({1: 2})])
    assert thmA_enumerate(hs, 5) == oracle_support(hs, 5)


def test_thmA_real_and_imaginary(mixed):
    hs = HoleSet.for_simple(mixed, mixed.weight([1, -1]))
    assert thmA_enumerate(hs, 5) == oracle_support(hs, 5)


def test_thmA_threads_do_not_change_result(a3):
    hs = HoleSet.for_simple(a3, a3.weyl_vector())
    assert thmA_enumerate(hs, 5, threads=3) == thmA_enumerate(hs, 5, threads=1)


def test_thmA_rejects_non_nice():
    A = validate_matrix([[2, 0], [0, -2]])
    hs = HoleSet(A, A.weight([0, 0]), [Hole({0: 1, 1: 1})])
    assert not hs.is_nice()
    with pytest.raises(InvalidHole):
        thmA_enumerate(hs, 3)


def test_thmB_non_nice():
    A = validate_matrix([[2, 0], [0, -2]])
    hs = HoleSet(A, A.weight([0, 0]), [Hole({0: 1, 1: 1})])
    expected = [g for g in grades_up_to(2, 4) if g[0] == 0 or g[1] == 0]
    assert thmB_weights(hs, 4, check=True) == expected
    assert thmB_first_formula(hs, 4) == expected
    assert oracle_support(hs, 4) == expected


def test_minkowski_decomposition():
    A = validate_matrix([[-2, -1], [-1, -2]])
    hs = HoleSet.for_simple(A, A.weight([1, 0]))
    assert minkowski_check(hs, 4)


@pytest.mark.parametrize("seed", range(4))
def test_random_nice_instances(seed):
    rng = random.Random(seed)
    A = random_matrix(rng, rng.randint(1, 2))
    lam = random_weight(rng, A)
    hs = random_hole_set(rng, A, lam, nice=True)
    assert set(thmA_enumerate(hs, 4)) == set(oracle_support(hs, 4))


@pytest.mark.parametrize("seed", range(4))
def test_random_capped_instances(seed):
    rng = random.Random(100 + seed)
    A = random_matrix(rng, 2)
    lam = random_weight(rng, A)
    hs = random_hole_set(rng, A, lam, nice=False)
    assert set(thmB_weights(hs, 4)) == set(oracle_support(hs, 4))


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(10))
def test_random_rank3_instances(seed):
    rng = random.Random(1000 + seed)
    A = random_matrix(rng, 3)
    lam = random_weight(rng, A)
    hs = random_hole_set(rng, A, lam, nice=bool(seed % 2))
    assert set(thmB_weights(hs, 5)) == set(oracle_support(hs, 5))


# properties of the enumeration


def random_nice_case(rng, rank):
    A = random_matrix(rng, rank)
    lam = random_weight(rng, A)
    return random_hole_set(rng, A, lam, nice=True)


def redundant_holes(hs):
    """Holes strictly above the given ones: one more node, or one more Heisenberg power."""
    A, cone = hs.A, hs.cone
    out = []
    for hole in hs.holes:
        powers = dict(hole.powers)
        for k in sorted(cone.J_lambda - hole.support):
            if A.is_independent(hole.support | {k}):
                out.append(Hole({**powers, k: cone.powers[k]}))
        for h, m in hole.powers:
            if A.node_types[h] is NodeType.HEISENBERG:
                out.append(Hole({**powers, h: m + 1}))
    return out


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_closed_under_integrable_reflections(seed):
    rng = random.Random(500 + seed)
    hs = random_nice_case(rng, rng.randint(1, 3))
    A, cutoff = hs.A, 5
    out = set(thmA_enumerate(hs, cutoff))
    for i in hs.integrable_nodes():
        for beta in out:
            shift = A.subtract_roots(hs.lam, beta).pairings[i]
            image = tuple(b + int(shift) if k == i else b for k, b in enumerate(beta))
            assert min(image) >= 0
            if height(image) <= cutoff:
                assert image in out


@pytest.mark.parametrize("seed", range(8))
def test_enumeration_free_outside_J(seed):
    rng = random.Random(600 + seed)
    hs = random_nice_case(rng, rng.randint(1, 3))
    A, cutoff = hs.A, 5
    out = set(thmA_enumerate(hs, cutoff))
    for i in set(range(A.n)) - hs.cone.J_lambda:
        for beta in out:
            step = tuple(b + (k == i) for k, b in enumerate(beta))
            if height(step) <= cutoff:
                assert step in out


@pytest.mark.parametrize("seed", range(8))
def test_all_weights_iff_no_holes(seed):
    rng = random.Random(700 + seed)
    hs = random_nice_case(rng, rng.randint(1, 3))
    A, cutoff = hs.A, 5
    everything = grades_up_to(A.n, cutoff)
    assert set(thmA_enumerate(HoleSet(A, hs.lam, []), cutoff)) == set(everything)
    low = [h.grade(A.n) for h in hs.holes if h.height <= cutoff]
    out = set(thmA_enumerate(hs, cutoff))
    for g in low:
        assert g not in out
    assert (out == set(everything)) == (not low)


@pytest.mark.parametrize("seed", range(8))
def test_only_minimal_holes_matter(seed):
    rng = random.Random(800 + seed)
    hs = random_nice_case(rng, rng.randint(1, 3))
    padded = hs.with_holes(redundant_holes(hs))
    assert padded.minimal() == hs.minimal()
    expected = set(thmA_enumerate(hs.minimal(), 4))
    assert set(thmA_enumerate(padded, 4)) == expected
    assert set(thmB_weights(padded, 4)) == expected


@pytest.mark.parametrize("seed", range(4))
def test_quotient_only_sees_minimal_holes(seed):
    rng = random.Random(900 + seed)
    A = random_matrix(rng, 2)
    lam = random_weight(rng, A)
    hs = random_hole_set(rng, A, lam, nice=False)
    verma = build_verma(A, lam, 4)
    padded = hs.with_holes(redundant_holes(hs))
    assert quotient_multiplicities(verma, padded, 4) == quotient_multiplicities(verma, hs.minimal(), 4)
