"""
Closed-form characters of rank-2 simple modules with no real node.

For A(b,a,a,b) and λ in P± the numerator of char L(λ) is read off the
solutions of the norm equation through (1,1), λ = ρ and (2,2); the
composition-series numerators cover A(b,a,c,d) with a unique interior solution.
"""
import math
from typing import Dict, List, Optional, Tuple

from loguru import logger
from sympy import divisors

from ..cartan import BkmCartanMatrix, Grade, Weight, grades_up_to
from ..config.settings import THREADS
from ..errors import AssertionFailed, CaseNotCovered, HypothesisFails, InvalidInput
from ..lie_engine import GradedNilpotent, VermaModel, build_nilpotent, build_verma, simple_multiplicities
from ..solver.kk import kk_linked
from ..solver.rank2 import QuadraticInstance, classify_22, enumerate_solutions_rank2
from .formulas import denominator_for, independent_subset_sum
from .series import FormalCharacter


def _check_symmetric_shape(A: BkmCartanMatrix):
    if A.n != 2 or A.real_nodes:
        raise InvalidInput("expected a rank-2 matrix without real nodes")
    if A[0, 0] != A[1, 1] or A[0, 1] != A[1, 0] or A[0, 0] >= 0 or A[0, 1] >= 0:
        raise InvalidInput("expected A(b,a,a,b) = [[-b,-a],[-a,-b]] with a, b > 0")


def _powers(A: BkmCartanMatrix, lam: Weight) -> Tuple[int, int]:
    cone = A.cone_membership(lam)
    if not cone.in_P_pm:
        raise InvalidInput(f"λ = {lam.to_dict()['pairings']} is not in P±")
    return cone.powers[0], cone.powers[1]


def theorem_c_numerator(A: BkmCartanMatrix, lam: Weight) -> Tuple[str, Dict[Grade, int]]:
    """
    (case, numerator coefficients) for L(λ) over A(b,a,a,b).

    Raises:
        CaseNotCovered: neither (1,1) nor (2,2) solves and λ ≠ ρ, or the (2,2)
            case has min(M_1, M_2) < 3 in subcase (A)/(B).
    """
    _check_symmetric_shape(A)
    lam = A.weight(lam.pairings)
    M1, M2 = _powers(A, lam)
    num = {(0, 0): 1, (M1, 0): -1, (0, M2): -1}
    if lam == A.weyl_vector():
        if A[0, 1] == A[0, 0]:
            num[(1, 1)] = -1
        return "II", num
    if A.bilinear_residual(lam, (1, 1)) == 0:
        if min(M1, M2) >= 2:
            num[(1, 1)] = -1
        return "I", num
    if A.bilinear_residual(lam, (2, 2)) == 0:
        inst = QuadraticInstance.from_weight(A, lam)
        cls = classify_22(inst)
        if cls.case in ("A", "B"):
            if min(M1, M2) < 3:
                raise CaseNotCovered(
                    f"(2,2) solves with min(M_1, M_2) = {min(M1, M2)} < 3",
                    case=cls.case,
                    powers=[M1, M2],
                )
            num[(2, 2)] = -2
            if cls.case == "B":
                for g in cls.extra:
                    num[g] = num.get(g, 0) - 1
        return f"III-{cls.case}", num
    raise CaseNotCovered(
        "neither (1,1) nor (2,2) solves the norm equation and λ ≠ ρ",
        powers=[M1, M2],
    )


def oracle_character(A: BkmCartanMatrix, lam: Weight, cutoff: int, nil: Optional[GradedNilpotent] = None) -> FormalCharacter:
    """char L(λ) from the simple quotient of the truncated Verma module."""
    verma = build_verma(A, lam, cutoff, nil)
    mults = simple_multiplicities(verma)
    return FormalCharacter.from_multiplicities(verma.lam, mults, cutoff, source="oracle")


def char_simple_rank2(
    A: BkmCartanMatrix,
    lam: Weight,
    cutoff: int,
    oracle_fallback: bool = False,
    nil: Optional[GradedNilpotent] = None,
    threads: int = THREADS,
) -> FormalCharacter:
    """
    char L(λ) over A(b,a,a,b) from its closed-form numerator.

    With `oracle_fallback` an uncovered instance is computed by the engine and
    labelled with source "oracle" instead of raising CaseNotCovered.
    """
    lam = A.weight(lam.pairings)
    try:
        case, num = theorem_c_numerator(A, lam)
    except CaseNotCovered as e:
        if not oracle_fallback:
            raise
        logger.warning(f"{e.message}; falling back to the engine")
        return oracle_character(A, lam, cutoff, nil)
    logger.debug(f"rank-2 numerator case {case}: {sorted(num.items())}")
    numerator = FormalCharacter.build(lam, num, cutoff, 2)
    return numerator.multiply(independent_subset_sum(A, cutoff).inverse(), threads).with_source(f"case {case}")


def composition_r(A: BkmCartanMatrix, lam: Weight, M1: int, n: int, nil: Optional[GradedNilpotent] = None) -> Dict:
    """
    r = dim Hom(M(λ − M_1α_1 − nα_2), M(λ)) and its lower bound
    Σ_{t | gcd(M_1, n)} m((M_1, n)/t).
    """
    grade = (M1, n)
    nil = nil or build_nilpotent(A, M1 + n)
    verma = VermaModel(nil, A.weight(lam.pairings))
    r = verma.hom_dimension(grade)
    bound = sum(nil.multiplicity((M1 // t, n // t)) for t in divisors(math.gcd(M1, n)))
    return {"grade": list(grade), "r": r, "lower_bound": bound}


def composition_hypothesis(A: BkmCartanMatrix, lam: Weight) -> Tuple[int, int, int]:
    """
    (M_1, M_2, n) with n = M_2 − (2c/d)M_1 a positive integer and (M_1, n) the
    only solution of the norm equation with both coordinates positive.

    Raises:
        HypothesisFails: either condition fails.
    """
    if A.n != 2 or A.real_nodes or A[0, 1] == 0:
        raise InvalidInput("expected a rank-2 matrix A(b,a,c,d) without real nodes")
    lam = A.weight(lam.pairings)
    M1, M2 = _powers(A, lam)
    c, d = -A[1, 0], -A[1, 1]
    if d == 0:
        raise HypothesisFails("node 2 is Heisenberg, n = M_2 − (2c/d)M_1 is undefined")
    n = M2 - 2 * c / d * M1
    if n.denominator != 1 or n < 1:
        raise HypothesisFails(f"n = M_2 − (2c/d)M_1 = {n} is not a positive integer")
    n = int(n)
    inst = QuadraticInstance.from_weight(A, lam)
    interior = [s for s in enumerate_solutions_rank2(inst).solutions if s[0] >= 1 and s[1] >= 1]
    if interior != [(M1, n)]:
        raise HypothesisFails(
            f"(M_1, n) = ({M1}, {n}) is not the unique interior solution",
            interior=[list(s) for s in interior],
        )
    return M1, M2, n


def char_numerators_6r(
    A: BkmCartanMatrix,
    lam: Weight,
    r: Optional[int] = None,
    nil: Optional[GradedNilpotent] = None,
) -> List[Dict]:
    """
    The numerators 1 − l·x^{M_1α_1} − i·x^{M_2α_2} − (j+k−l)·x^{M_1α_1+nα_2},
    l, i, j ∈ {0,1}, l ≤ j, 0 ≤ k < r, of the 6r quotients of M(λ).
    """
    lam = A.weight(lam.pairings)
    M1, M2, n = composition_hypothesis(A, lam)
    if r is None:
        r = composition_r(A, lam, M1, n, nil)["r"]
    if r < 1:
        raise HypothesisFails(f"r = {r}, expected a maximal vector at ({M1}, {n})")
    cutoff = max(M1 + n, M2)
    out = []
    for l in (0, 1):
        for i in (0, 1):
            for j in (0, 1):
                if l > j:
                    continue
                for k in range(r):
                    coeffs = {(0, 0): 1, (M1, 0): -l, (0, M2): -i, (M1, n): -(j + k - l)}
                    out.append({
                        "l": l,
                        "i": i,
                        "j": j,
                        "k": k,
                        "numerator": FormalCharacter.build(lam, coeffs, cutoff, 2),
                    })
    if len(out) != 6 * r:
        raise AssertionFailed(f"expected {6 * r} numerators, built {len(out)}")
    return out


def simple_numerator_6r(numerators: List[Dict]) -> FormalCharacter:
    """The numerator with l = i = j = 1, k = r − 1, the one of L(λ)."""
    r = len(numerators) // 6
    for item in numerators:
        if (item["l"], item["i"], item["j"], item["k"]) == (1, 1, 1, r - 1):
            return item["numerator"]
    raise AssertionFailed("the L(λ) numerator is missing")


def kk_vs_numerator_report(
    A: BkmCartanMatrix,
    lam: Weight,
    character: FormalCharacter,
    nil: Optional[GradedNilpotent] = None,
) -> Dict:
    """
    Side by side, up to the character's cutoff: the nonzero grades solving the
    norm equation, those linked to λ by a Kac-Kazhdan chain, and the numerator
    support char · R.
    """
    lam = A.weight(lam.pairings)
    cutoff = character.cutoff
    nil = nil or build_nilpotent(A, cutoff)
    numerator = character * denominator_for(A, cutoff, nil)
    support = [g for g in numerator.support() if sum(g)]
    norm = [g for g in grades_up_to(A.n, cutoff, 1) if A.bilinear_residual(lam, g) == 0]
    linked = [g for g in norm if kk_linked(A, lam, g, nil=nil).linked]
    norm_set = set(norm)
    return {
        "norm_equality": [list(g) for g in norm],
        "kk_linked": [list(g) for g in linked],
        "numerator_support": [list(g) for g in support],
        "numerator_inside_norm_set": all(g in norm_set for g in support),
        "numerator_inside_kk_set": set(support) <= set(linked),
    }
