"""
When X² + Y² + XY − M_1X − M_2Y = 0 has exactly one solution with X, Y ≥ 1.
"""
import math
from typing import Dict, List, Tuple

from sympy import isprime, primefactors

from ..errors import InvalidInput
from .rank2 import QuadraticInstance, enumerate_solutions_rank2


def _ordered(M1: int, M2: int) -> Tuple[int, int]:
    M1, M2 = int(M1), int(M2)
    if M1 < 1 or M2 < 1:
        raise InvalidInput(f"powers must be positive, got ({M1}, {M2})")
    return (M1, M2) if M1 <= M2 else (M2, M1)


def unique_solution_predicate(M1: int, M2: int) -> bool:
    """
    With d = gcd(M_1, M_2) and M_1 ≤ M_2:
    every prime factor of d is 2, 3 or ≡ 5 mod 6; M_1 = M_2 forces 3 | d;
    M_2 ∉ {M_1, 2M_1} forces 3 ∤ d and (M_1² + M_2² − M_1M_2)/d² prime ≡ 1 mod 6.
    """
    M1, M2 = _ordered(M1, M2)
    d = math.gcd(M1, M2)
    if any(p not in (2, 3) and p % 6 != 5 for p in primefactors(d)):
        return False
    if M1 == M2 and d % 3:
        return False
    if M2 not in (M1, 2 * M1):
        if d % 3 == 0:
            return False
        q = (M1 * M1 + M2 * M2 - M1 * M2) // (d * d)
        if not (isprime(q) and q % 6 == 1):
            return False
    return True


def interior_solutions(M1: int, M2: int) -> List[Tuple[int, int]]:
    M1, M2 = _ordered(M1, M2)
    inst = QuadraticInstance.symmetric(2, 1, M1, M2)
    return enumerate_solutions_rank2(inst).interior


def unique_solution_bruteforce(M1: int, M2: int) -> bool:
    return len(interior_solutions(M1, M2)) == 1


def uniqueness_table(max_power: int) -> Dict:
    """Predicate against brute force for every 1 ≤ M_1 ≤ M_2 ≤ max_power."""
    mismatches = []
    uniques = []
    pairs = 0
    for M1 in range(1, max_power + 1):
        for M2 in range(M1, max_power + 1):
            pairs += 1
            pred = unique_solution_predicate(M1, M2)
            if pred != unique_solution_bruteforce(M1, M2):
                mismatches.append([M1, M2])
            if pred:
                uniques.append([M1, M2])
    return {"pairs": pairs, "mismatches": mismatches, "unique": uniques}
