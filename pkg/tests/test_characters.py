import random
from math import comb

import pytest

from bkm_weights.cartan import Weight, negative_type_a, rank2, validate_matrix
from bkm_weights.characters import (
    FormalCharacter,
    char_numerators_6r,
    char_simple_rank2,
    char_thmD,
    char_verma,
    char_wkb,
    composition_hypothesis,
    composition_r,
    denominator,
    denominator_for,
    independent_subset_sum,
    kk_vs_numerator_report,
    oracle_character,
    simple_numerator_6r,
    theorem_c_numerator,
)
from bkm_weights.errors import CaseNotCovered, HypothesisFails, InvalidInput, NotDominant
from bkm_weights.lie_engine import QuotientModel, build_nilpotent, build_verma
from bkm_weights.verify import random_matrix, random_weight, theorem_c_instances
from bkm_weights.weights import Hole, HoleSet


def series(coeffs, cutoff, rank=2):
    return FormalCharacter.build(Weight((0,) * rank), coeffs, cutoff, rank)


# formal characters


def test_inverse_gives_binomials():
    inv = series({(0, 0): 1, (1, 0): -1, (0, 1): -1}, 6).inverse()
    for a, b in [(0, 0), (1, 1), (2, 3), (3, 3)]:
        assert inv.coefficient((a, b)) == comb(a + b, a)


def test_inverse_needs_unit():
    with pytest.raises(InvalidInput):
        series({(0, 0): 2, (1, 0): 1}, 3).inverse()


def test_product_truncates_to_smaller_cutoff():
    left = series({(0, 0): 1, (1, 0): 1}, 5)
    right = series({(0, 0): 1, (0, 1): 1}, 1)
    prod = left * right
    assert prod.cutoff == 1
    assert prod.support() == [(0, 0), (0, 1), (1, 0)]


def test_threaded_product_matches(free_rank2):
    R = independent_subset_sum(free_rank2, 6)
    inv = R.inverse()
    assert inv.multiply(inv, threads=3) == inv.multiply(inv, threads=1)


def test_truncate_and_table():
    inv = series({(0, 0): 1, (1, 0): -1, (0, 1): -1}, 6).inverse()
    short = inv.truncate(2)
    assert short.cutoff == 2
    assert short.support() == [(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]
    assert inv.truncate(9).cutoff == 6
    assert short.to_table().row_count == 6


def test_coefficient_above_cutoff():
    with pytest.raises(InvalidInput):
        series({(0, 0): 1}, 2).coefficient((2, 1))


def test_character_dict_round_trip(sl3):
    ch = char_wkb(sl3, sl3.weight([1, 1]), 4)
    assert FormalCharacter.from_dict(ch.to_dict()) == ch


# denominators and Verma characters


def test_denominator_free_rank2(free_rank2):
    R = denominator(free_rank2, 5)
    assert R.rows() == [((0, 0), 1), ((0, 1), -1), ((1, 0), -1)]


def test_denominator_sl3(sl3):
    R = denominator(sl3, 4)
    assert R.coefficient((1, 1)) == 0
    assert R.coefficient((2, 1)) == 1
    assert R.coefficient((1, 2)) == 1
    assert R.coefficient((2, 2)) == -1


def test_independent_subsets_of_a3(a3):
    R = independent_subset_sum(a3, 4)
    assert R.coefficient((1, 0, 1)) == 1
    assert R.coefficient((1, 1, 0)) == 0
    assert R.coefficient((1, 0, 0)) == -1


def test_char_verma(free_rank2, sl3):
    ch = char_verma(free_rank2, free_rank2.weyl_vector(), 5)
    assert ch.coefficient((1, 1)) == 2
    assert ch.coefficient((2, 3)) == 10
    ch = char_verma(sl3, sl3.weight([0, 0]), 4)
    assert ch.coefficient((2, 2)) == 3


# Weyl-Kac-Borcherds


def test_wkb_sl2():
    A = validate_matrix([[2]])
    ch = char_wkb(A, A.weight([2]), 5)
    assert ch.rows() == [((0,), 1), ((1,), 1), ((2,), 1)]


def test_wkb_sl3(sl3):
    ch = char_wkb(sl3, sl3.weight([1, 0]), 4)
    assert ch.rows() == [((0, 0), 1), ((1, 0), 1), ((1, 1), 1)]
    adjoint = char_wkb(sl3, sl3.weight([1, 1]), 4)
    assert adjoint.coefficient((1, 1)) == 2
    assert sum(adjoint.coeffs.values()) == 8


def test_wkb_matches_engine(mixed):
    lam = mixed.weight([1, 0])
    assert char_wkb(mixed, lam, 4) == oracle_character(mixed, lam, 4)


def test_wkb_needs_dominant(sl2):
    with pytest.raises(NotDominant):
        char_wkb(sl2, sl2.weight([-1]), 3)


# rank 2 closed forms


@pytest.mark.parametrize("inst", theorem_c_instances(), ids=lambda inst: inst["case"])
def test_theorem_c_against_engine(inst):
    A = inst["A"]
    lam = A.weyl_vector() if inst["lam"] == "rho" else A.weight(inst["lam"])
    ch = char_simple_rank2(A, lam, 6)
    assert ch == oracle_character(A, lam, 6)
    assert ch.source.startswith("case " + inst["case"].split("-")[0])


@pytest.mark.parametrize("inst", theorem_c_instances(), ids=lambda inst: inst["case"])
def test_numerator_lives_on_the_norm_set(inst):
    A = inst["A"]
    lam = A.weyl_vector() if inst["lam"] == "rho" else A.weight(inst["lam"])
    _, num = theorem_c_numerator(A, lam)
    for g, c in num.items():
        if c:
            assert A.bilinear_residual(lam, g) == 0


@pytest.mark.parametrize("seed", range(6))
def test_verma_times_denominator_is_top_term(seed):
    rng = random.Random(400 + seed)
    A = random_matrix(rng, rng.randint(1, 3))
    lam = random_weight(rng, A)
    nil = build_nilpotent(A, 4)
    ch = char_verma(A, lam, 4, nil=nil)
    assert ch * denominator_for(A, 4, nil) == FormalCharacter.one(A.n, 4, top=lam)


def test_theorem_c_numerators(free_rank2):
    case, num = theorem_c_numerator(free_rank2, free_rank2.weight([-2, -1]))
    assert case == "III-A"
    assert num == {(0, 0): 1, (5, 0): -1, (0, 3): -1, (2, 2): -2}
    case, num = theorem_c_numerator(free_rank2, free_rank2.weight(["-3/2", "-3/2"]))
    assert case == "III-B"
    assert num[(1, 3)] == num[(3, 1)] == -1


def test_case_not_covered():
    A = rank2(4, 1)
    lam = A.weight([-2, -2])
    with pytest.raises(CaseNotCovered):
        char_simple_rank2(A, lam, 5)
    ch = char_simple_rank2(A, lam, 5, oracle_fallback=True)
    assert ch.source == "oracle"
    assert ch == oracle_character(A, lam, 5)


def test_rank2_shape_checked(sl3):
    with pytest.raises(InvalidInput):
        theorem_c_numerator(sl3, sl3.weyl_vector())
    A = rank2(2, 1, 1, 3)
    with pytest.raises(InvalidInput):
        theorem_c_numerator(A, A.weyl_vector())


def test_composition_numerators(a2):
    lam = a2.weight([0, -3])
    assert composition_hypothesis(a2, lam) == (1, 4, 3)
    comp = composition_r(a2, lam, 1, 3)
    assert comp["r"] >= comp["lower_bound"] == 1
    numerators = char_numerators_6r(a2, lam, comp["r"])
    assert len(numerators) == 6 * comp["r"]
    simple = simple_numerator_6r(numerators)
    assert simple.coefficient((1, 0)) == -1
    assert simple.coefficient((0, 4)) == -1
    cutoff = 6
    oracle = oracle_character(a2, lam, cutoff) * independent_subset_sum(a2, cutoff)
    assert oracle == FormalCharacter.build(simple.top, simple.coeffs, cutoff, 2)


def test_composition_hypothesis_fails(free_rank2):
    with pytest.raises(HypothesisFails):
        composition_hypothesis(free_rank2, free_rank2.weyl_vector())


def test_kk_report_at_rho(free_rank2):
    rho = free_rank2.weyl_vector()
    report = kk_vs_numerator_report(free_rank2, rho, char_simple_rank2(free_rank2, rho, 5))
    assert report["numerator_inside_norm_set"]
    assert [1, 1] in report["numerator_support"]
    assert [1, 1] in report["kk_linked"]


# holes over A(n) at ρ


def quotient_character(hs, cutoff):
    verma = build_verma(hs.A, hs.lam, cutoff)
    return FormalCharacter.from_multiplicities(verma.lam, QuotientModel(verma, hs).multiplicities(), cutoff)


def test_thmD_simple_a2():
    A = negative_type_a(2)
    hs = HoleSet.for_simple(A, A.weyl_vector())
    ch = char_thmD(2, hs, 5)
    numerator = ch * independent_subset_sum(A, 5)
    assert numerator.rows() == [((0, 0), 1), ((0, 2), -1), ((2, 0), -1)]
    assert ch == quotient_character(hs, 5)


def test_thmD_covering_families():
    A = negative_type_a(3)
    hs = HoleSet(A, A.weyl_vector(), [Hole({0: 2, 2: 2}), Hole({0: 2}), Hole({1: 2})])
    ch = char_thmD(3, hs, 4)
    numerator = ch * independent_subset_sum(A, 4)
    assert numerator.coefficient((2, 0, 0)) == -1
    assert numerator.coefficient((2, 0, 2)) == 0
    assert ch == quotient_character(hs, 4)


def test_thmD_wrong_matrix(a2):
    hs = HoleSet.for_simple(a2, a2.weyl_vector())
    with pytest.raises(InvalidInput):
        char_thmD(3, hs, 4)
