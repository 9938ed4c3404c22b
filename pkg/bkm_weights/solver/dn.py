"""
The quadratic d⁽ⁿ⁾ governing A(n) at λ = ρ:

    d⁽ⁿ⁾(X) = (X_1−1)² + Σ_{i<n} (X_i + X_{i+1} − 1)² + (X_n−1)² − (n+1)

which is the norm-equation residual of A(n) at ρ. A zero entry splits it
into the functions of the two halves; d⁽⁰⁾ = 0.
"""
import math
from itertools import product
from typing import Dict, List, Sequence, Tuple

from attrs import frozen
from loguru import logger

from ..errors import InvalidInput, NotASolution


def dn_value(xs: Sequence[int]) -> int:
    n = len(xs)
    if n == 0:
        return 0
    total = (xs[0] - 1) ** 2 + (xs[-1] - 1) ** 2
    total += sum((xs[i] + xs[i + 1] - 1) ** 2 for i in range(n - 1))
    return total - (n + 1)


def dn_split(xs: Sequence[int], i: int) -> Tuple[int, int]:
    """(d(left half), d(right half)) around a zero at position i."""
    if xs[i] != 0:
        raise InvalidInput(f"entry {i} of {list(xs)} is not zero")
    return dn_value(xs[:i]), dn_value(xs[i + 1:])


def box_side(n: int) -> int:
    """Every solution has X_i ≤ 1 + √(n+1)."""
    return 1 + math.isqrt(n + 1)


def block_decompose(xs: Sequence[int]) -> List[Tuple[int, ...]]:
    """Maximal runs of positive entries."""
    blocks, run = [], []
    for x in xs:
        if x > 0:
            run.append(x)
        elif run:
            blocks.append(tuple(run))
            run = []
    if run:
        blocks.append(tuple(run))
    return blocks


def is_hole_solution(xs: Sequence[int]) -> bool:
    """Entries in {0, 2} with no two adjacent 2s."""
    if any(x not in (0, 2) for x in xs):
        return False
    return not any(xs[i] == 2 and xs[i + 1] == 2 for i in range(len(xs) - 1))


def block_lemma_check(xs: Sequence[int]) -> bool:
    """
    A solution outside the {0,2} pattern has at least two blocks, one of them
    all ones and one holding an entry > 1.

    Raises:
        NotASolution: d⁽ⁿ⁾(xs) ≠ 0.
    """
    if dn_value(xs) != 0:
        raise NotASolution(f"{list(xs)} is not a zero of d^({len(xs)})")
    if is_hole_solution(xs):
        return True
    blocks = block_decompose(xs)
    return (
        len(blocks) >= 2
        and any(all(x == 1 for x in b) for b in blocks)
        and any(any(x > 1 for x in b) for b in blocks)
    )


@frozen
class DnSolution:
    values: Tuple[int, ...]
    blocks: Tuple[Tuple[int, ...], ...]
    hole_solution: bool

    def to_dict(self):
        return {
            "X": list(self.values),
            "blocks": [list(b) for b in self.blocks],
            "is_hole_solution": self.hole_solution,
        }


def enumerate_dn(n: int, include_zero: bool = False) -> List[DnSolution]:
    """Every zero of d⁽ⁿ⁾ in ℤ≥0ⁿ, sorted lexicographically."""
    if n < 1:
        raise InvalidInput(f"n must be >= 1, got {n}")
    side = box_side(n)
    out = []
    for xs in product(range(side + 1), repeat=n):
        if not include_zero and not any(xs):
            continue
        if dn_value(xs) == 0:
            out.append(DnSolution(xs, tuple(block_decompose(xs)), is_hole_solution(xs)))
    logger.debug(f"d^({n}): {len(out)} solutions in the box [0,{side}]^{n}")
    return out


def dn_count_table(n_max: int) -> Dict[int, Dict[str, int]]:
    table = {}
    for n in range(1, n_max + 1):
        with_zero = len(enumerate_dn(n, include_zero=True))
        table[n] = {"with_zero": with_zero, "without_zero": with_zero - 1}
    return table
