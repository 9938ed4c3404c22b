import random
from pathlib import Path

import pytest

from bkm_weights.cartan import grades_up_to, negative_type_a, rank2, validate_matrix
from bkm_weights.errors import InvalidInput, NotASolution, PremiseFails, UnboundedWithoutBox
from bkm_weights.helper import relp
from bkm_weights.lie_engine import build_nilpotent
from bkm_weights.solver import (
    KkStep,
    QuadraticInstance,
    block_decompose,
    block_lemma_check,
    chain_residuals,
    check_solution,
    classify_22,
    dn_count_table,
    dn_split,
    dn_value,
    enumerate_dn,
    enumerate_solutions_rank2,
    interior_solutions,
    is_hole_solution,
    kk_check,
    kk_linked,
    kk_linked_set,
    lemma_square,
    pell_instance,
    solve_with_sympy,
    unique_solution_bruteforce,
    unique_solution_predicate,
    uniqueness_table,
)
from bkm_weights.verify import random_matrix, random_weight, theorem_c_instances


def instance(A, lam):
    return QuadraticInstance.from_weight(A, A.weight(lam))


# norm equation


def test_coefficients(free_rank2):
    inst = instance(free_rank2, [-2, -1])
    assert inst.variant == "N"
    assert (inst.cxx, inst.cyy, inst.cxy, inst.cx, inst.cy) == (1, 1, 2, -5, -3)
    assert inst.powers == (5, 3)


def test_symmetric_constructor():
    inst = QuadraticInstance.symmetric(2, 1, 1, 4)
    assert inst.solves((1, 3))
    assert not inst.solves((1, 1))


@pytest.mark.parametrize(
    "A, lam, solutions, case, extra",
    [
        (rank2(1, 1), [-2, -1], [(0, 0), (0, 3), (2, 2), (5, 0)], "A", ()),
        (rank2(1, 1), ["-3/2", "-3/2"], [(0, 0), (0, 4), (1, 3), (2, 2), (3, 1), (4, 0)], "B", ((1, 3), (3, 1))),
        (rank2(4, 1), [-6, 0], None, "C", ()),
        (rank2(2, 1), [-4, 0], None, "D", ((4, 1),)),
    ],
)
def test_classify_22(A, lam, solutions, case, extra):
    inst = instance(A, lam)
    found = enumerate_solutions_rank2(inst)
    assert found.complete
    if solutions is not None:
        assert found.solutions == solutions
    assert (2, 2) in found.solutions
    cls = classify_22(inst)
    assert cls.case == case
    assert cls.extra == extra


def test_classify_reads_larger_power_first(free_rank2):
    cls = classify_22(instance(free_rank2, [-1, -2]))
    assert cls.case == "A"
    assert cls.swapped


def test_premise_fails(free_rank2):
    with pytest.raises(PremiseFails):
        classify_22(instance(free_rank2, free_rank2.weyl_vector().pairings))


def test_box_narrows_variant_n(free_rank2):
    found = enumerate_solutions_rank2(instance(free_rank2, [-2, -1]), box=2)
    assert found.solutions == [(0, 0), (2, 2)]
    assert not found.complete


def test_lemma_square():
    assert lemma_square(1, 1, 5, 3) == 5
    assert lemma_square(4, 1, 4, 1) == 8
    inst = QuadraticInstance.symmetric(4, 1, 4, 1)
    side = lemma_square(4, 1, 4, 1)
    assert all(x <= side and y <= side for x, y in enumerate_solutions_rank2(inst).solutions)


def test_pell_needs_box():
    inst = pell_instance()
    assert inst.variant == "R"
    with pytest.raises(UnboundedWithoutBox):
        enumerate_solutions_rank2(inst)
    found = enumerate_solutions_rank2(inst, box=(40, 40))
    assert {(0, 0), (0, 2), (2, 0)} <= set(found.solutions)
    assert not found.complete
    for sol in found.solutions:
        check_solution(inst, sol)


def test_pell_instance_file(tmp_path):
    assert Path(relp("../bkm_weights/configs/pell-instance.json")).exists()
    with pytest.raises(InvalidInput):
        pell_instance(str(tmp_path / "missing.json"))


def test_pell_coefficients():
    A = validate_matrix([[2, -2], [-2, -2]])
    inst = instance(A, A.weyl_vector().pairings)
    assert (inst.cxx, inst.cyy, inst.cxy, inst.cx, inst.cy) == (-2, 2, 4, 4, -4)


def test_heisenberg_closed_form():
    A = validate_matrix([[0, -1], [-1, -2]])
    inst = instance(A, [0, -1])
    assert inst.variant == "H"
    found = enumerate_solutions_rank2(inst)
    assert found.closed_form["families"][0] == "Y = 0"
    assert (1, 1) in found.solutions
    assert (0, 2) in found.solutions
    assert (6, 0) in found.solutions
    assert len(found.solutions) == 9


def test_variant_needs_rank2(a3):
    with pytest.raises(InvalidInput):
        QuadraticInstance.from_weight(a3, a3.weyl_vector())


def test_not_a_solution(free_rank2):
    with pytest.raises(NotASolution):
        check_solution(instance(free_rank2, [-2, -1]), (1, 1))


def test_kk_check(free_rank2):
    assert kk_check(instance(free_rank2, [-2, -1])) == {"k": 2, "holds": True, "violations": []}
    assert kk_check(instance(free_rank2, ["-3/2", "-3/2"]))["holds"]


def classified_instances():
    out = []
    for b in range(1, 5):
        for a in range(1, 5):
            for M1 in range(1, 13):
                for M2 in range(1, 13):
                    inst = QuadraticInstance.symmetric(b, a, M1, M2)
                    if inst.solves((2, 2)):
                        out.append(inst)
    for inst in theorem_c_instances():
        A = inst["A"]
        lam = A.weyl_vector() if inst["lam"] == "rho" else A.weight(inst["lam"])
        out.append(QuadraticInstance.from_weight(A, lam))
    return out


def test_kk_lemma_on_classified_instances():
    instances = classified_instances()
    assert len(instances) > len(theorem_c_instances())
    for inst in instances:
        if inst.solves((2, 2)):
            assert classify_22(inst).case in ("A", "B", "C", "D")
        assert kk_check(inst)["holds"]


def test_sympy_agrees_when_finite(free_rank2):
    inst = instance(free_rank2, [-2, -1])
    found = solve_with_sympy(inst)
    assert found is None or found == enumerate_solutions_rank2(inst).solutions


# d⁽ⁿ⁾


def test_dn_value_and_split():
    assert dn_value(()) == 0
    assert dn_value((2, 0, 2)) == 0
    assert dn_value((1, 1, 1)) != 0
    assert dn_split((2, 0, 2), 1) == (0, 0)
    with pytest.raises(InvalidInput):
        dn_split((1, 2), 0)


def test_dn_split_adds_up():
    rng = random.Random(23)
    for _ in range(200):
        left = [rng.randint(0, 4) for _ in range(rng.randint(0, 5))]
        right = [rng.randint(0, 4) for _ in range(rng.randint(0, 5))]
        xs = tuple(left + [0] + right)
        assert sum(dn_split(xs, len(left))) == dn_value(xs)


def test_blocks():
    assert block_decompose((1, 1, 0, 2, 0, 3)) == [(1, 1), (2,), (3,)]
    assert is_hole_solution((2, 0, 2))
    assert not is_hole_solution((2, 2, 0))
    assert not is_hole_solution((1, 0, 2))
    with pytest.raises(NotASolution):
        block_lemma_check((1, 1, 1))


def test_small_dn():
    assert [s.values for s in enumerate_dn(1)] == [(2,)]
    assert [s.values for s in enumerate_dn(2)] == [(0, 2), (2, 0)]
    assert len(enumerate_dn(3)) == 4
    assert len(enumerate_dn(3, include_zero=True)) == 5
    with pytest.raises(InvalidInput):
        enumerate_dn(0)


def test_dn_counts():
    table = dn_count_table(6)
    assert table[5]["with_zero"] == 33
    assert table[6]["with_zero"] == 93
    assert table[3] == {"with_zero": 5, "without_zero": 4}


@pytest.mark.parametrize("n", [4, 5, 6])
def test_block_lemma(n):
    for sol in enumerate_dn(n):
        assert block_lemma_check(sol.values)


# Kac-Kazhdan chains


def test_linked_at_rho(free_rank2):
    rho = free_rank2.weyl_vector()
    result = kk_linked(free_rank2, rho, (1, 1))
    assert result.linked and result.complete
    assert result.witness == [KkStep((1, 1), 1)]
    assert all(ok for _, _, ok in chain_residuals(free_rank2, rho, result.witness))


def test_not_linked():
    A = negative_type_a(4)
    result = kk_linked(A, A.weyl_vector(), (2, 1, 0, 1))
    assert not result.linked
    assert result.complete


def test_zero_grade_is_linked(free_rank2):
    assert kk_linked(free_rank2, free_rank2.weyl_vector(), (0, 0)).witness == []


def test_linked_rejects_bad_grade(free_rank2):
    with pytest.raises(InvalidInput):
        kk_linked(free_rank2, free_rank2.weyl_vector(), (1, -1))


def test_search_budget(a3):
    result = kk_linked(a3, a3.weyl_vector(), (2, 2, 2), search_budget=1)
    assert not result.complete
    assert not result.linked


def test_linked_set(free_rank2):
    linked = kk_linked_set(free_rank2, free_rank2.weyl_vector(), 4)
    assert set(linked) == {(0, 2), (1, 1), (2, 0)}
    assert all(r.linked for r in linked.values())


@pytest.mark.parametrize("seed", range(4))
def test_linked_grades_have_zero_residual(seed):
    rng = random.Random(200 + seed)
    A = random_matrix(rng, rng.randint(2, 3))
    lam = random_weight(rng, A)
    nil = build_nilpotent(A, 4)
    for beta in grades_up_to(A.n, 4, 1):
        result = kk_linked(A, lam, beta, nil)
        if result.linked:
            assert A.bilinear_residual(lam, beta) == 0


# unique interior solutions


@pytest.mark.parametrize(
    "M1, M2, unique",
    [(1, 1, False), (1, 2, True), (1, 4, True), (1, 5, False), (3, 3, True), (1, 13, True), (2, 2, False)],
)
def test_unique_predicate(M1, M2, unique):
    assert unique_solution_predicate(M1, M2) is unique
    assert unique_solution_bruteforce(M1, M2) is unique


def test_interior_solutions():
    assert interior_solutions(1, 4) == [(1, 3)]
    assert interior_solutions(4, 1) == [(1, 3)]
    with pytest.raises(InvalidInput):
        interior_solutions(0, 3)


def test_uniqueness_table():
    table = uniqueness_table(20)
    assert table["mismatches"] == []
    assert table["pairs"] == 210
    assert [m2 for m1, m2 in table["unique"] if m1 == 1] == [2, 3, 4, 6, 7, 9, 13, 15, 16]
