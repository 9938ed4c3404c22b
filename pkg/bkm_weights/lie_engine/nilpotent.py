"""
The graded Lie algebra n⁻ inside U(n⁻).

The grade-β piece is spanned by the standard bracketings of the Lyndon words
of content β; a basis is chosen greedily in Lyndon order and m_β is its size.
Brackets of basis elements are computed as commutators in U(n⁻) and written
back in the basis of the target grade.
"""
import math
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from loguru import logger
from sympy import divisors, factorint

from ..cartan import BkmCartanMatrix, Grade, add_grades, dominated, grades_up_to, height
from ..config.settings import BUDGET_MB
from ..decorators import log_elapsed
from ..errors import CutoffTooLarge, CutoffTooLargeForBudget, InvalidInput, NotFreeCase
from .cache import db_dict
from .enveloping import GradedEnveloping
from .linalg import Reducer, Vector, axpy
from .words import Word, bracketing, lyndon_words_of_content, standard_factorization

BYTES_PER_WORD = 128


class GradedNilpotent:
    def __init__(self, A: BkmCartanMatrix, cutoff: int, env: Optional[GradedEnveloping] = None):
        if cutoff < 1:
            raise InvalidInput(f"cutoff must be >= 1, got {cutoff}")
        self.A = A
        self.n = A.n
        self.cutoff = cutoff
        self.env = env or GradedEnveloping(A)
        self._lie: Dict[Word, Vector] = {}
        self._basis: Dict[Grade, List[Tuple[Word, Vector]]] = {}
        self._solver: Dict[Grade, Tuple[Reducer, Dict[int, int]]] = {}

    def _check_height(self, beta: Grade):
        if len(beta) != self.n:
            raise InvalidInput(f"grade {beta} has the wrong length for rank {self.n}")
        if height(beta) > self.cutoff:
            raise CutoffTooLarge(f"grade {tuple(beta)} is above the cutoff {self.cutoff}")

    def lie_element(self, w: Word) -> Vector:
        """Image in U(n⁻) of the standard bracketing of a Lyndon word."""
        w = tuple(w)
        if w not in self._lie:
            if len(w) == 1:
                self._lie[w] = self.env.word_element(w)
            else:
                u, v = standard_factorization(w)
                self._lie[w] = self.env.commutator(self.lie_element(u), self.lie_element(v))
        return self._lie[w]

    def basis(self, beta: Grade) -> List[Tuple[Word, Vector]]:
        beta = tuple(beta)
        if beta not in self._basis:
            self._check_height(beta)
            red = Reducer(track=True)
            chosen, index = [], {}
            if height(beta) > 0:
                for w in lyndon_words_of_content(beta):
                    vec = self.lie_element(w)
                    pos = red._added
                    if red.add(vec):
                        index[pos] = len(chosen)
                        chosen.append((w, vec))
            self._basis[beta] = chosen
            self._solver[beta] = (red, index)
            if chosen:
                logger.debug(f"n⁻ grade {beta}: multiplicity {len(chosen)}")
        return self._basis[beta]

    def multiplicity(self, beta: Grade) -> int:
        return len(self.basis(beta))

    def multiplicities(self, min_height: int = 1) -> Dict[Grade, int]:
        return {beta: self.multiplicity(beta) for beta in grades_up_to(self.n, self.cutoff, min_height)}

    def positive_roots(self) -> List[Grade]:
        """Grades of positive multiplicity up to the cutoff, sorted by (height, lex)."""
        return [beta for beta, m in self.multiplicities().items() if m]

    def is_root(self, beta: Grade) -> bool:
        return height(beta) > 0 and self.multiplicity(beta) > 0

    def coordinates(self, beta: Grade, vec: Vector) -> Dict[int, Fraction]:
        """Coordinates of an element of n⁻_β in basis(β)."""
        self.basis(beta)
        red, index = self._solver[beta]
        combo = red.solve(vec) if vec else {}
        if combo is None:
            raise InvalidInput(f"vector is not in n⁻ at grade {beta}")
        return {index[k]: c for k, c in combo.items() if c}

    def bracket(self, beta: Grade, a: int, gamma: Grade, b: int) -> Dict[int, Fraction]:
        """[x_a, y_b] for basis elements of grades β and γ, in the basis of β+γ."""
        target = add_grades(beta, gamma)
        if height(target) > self.cutoff:
            raise CutoffTooLarge(f"bracket lands at {target}, above the cutoff {self.cutoff}")
        x = self.basis(beta)[a][1]
        y = self.basis(gamma)[b][1]
        return self.coordinates(target, self.env.commutator(x, y))

    def _as_vector(self, beta: Grade, coords: Dict[int, Fraction]) -> Vector:
        out: Vector = {}
        for k, c in coords.items():
            axpy(out, c, self.basis(beta)[k][1])
        return out

    def check_antisymmetry(self, beta: Grade, gamma: Grade) -> bool:
        for a in range(self.multiplicity(beta)):
            for b in range(self.multiplicity(gamma)):
                xy = self.bracket(beta, a, gamma, b)
                yx = self.bracket(gamma, b, beta, a)
                if any(xy.get(k, 0) + yx.get(k, 0) for k in set(xy) | set(yx)):
                    return False
        return True

    def check_jacobi(self, beta: Grade, gamma: Grade, delta: Grade) -> bool:
        """[x,[y,z]] + [y,[z,x]] + [z,[x,y]] = 0 over all basis triples."""
        env = self.env
        grades = (beta, gamma, delta)
        for trip in _index_triples([self.multiplicity(g) for g in grades]):
            x, y, z = (self.basis(g)[k][1] for g, k in zip(grades, trip))
            total = env.commutator(x, env.commutator(y, z))
            axpy(total, 1, env.commutator(y, env.commutator(z, x)))
            axpy(total, 1, env.commutator(z, env.commutator(x, y)))
            if total:
                return False
        return True

    def kostant(self, beta: Grade) -> int:
        """P(β): coefficient of x^β in Π_α (1−x^α)^(−m_α)."""
        beta = tuple(beta)
        self._check_height(beta)
        grades = [g for g in grades_up_to(self.n, height(beta)) if dominated(g, beta)]
        series = {g: 0 for g in grades}
        series[(0,) * self.n] = 1
        for alpha in grades:
            if height(alpha) == 0:
                continue
            for _ in range(self.multiplicity(alpha)):
                for g in grades:
                    low = tuple(x - y for x, y in zip(g, alpha))
                    if all(c >= 0 for c in low):
                        series[g] += series[low]
        return series[beta]

    def to_dict(self):
        return {
            "cutoff": self.cutoff,
            "multiplicities": [
                {"grade": list(beta), "m": m} for beta, m in self.multiplicities().items()
            ],
        }


def _index_triples(sizes):
    for a in range(sizes[0]):
        for b in range(sizes[1]):
            for c in range(sizes[2]):
                yield a, b, c


def estimate_mb(n: int, cutoff: int) -> float:
    """Upper bound on the word tables: Σ_{h ≤ N} n^h words."""
    words = sum(n**h for h in range(cutoff + 1))
    return words * BYTES_PER_WORD / 2**20


@log_elapsed("build_nilpotent")
def build_nilpotent(A: BkmCartanMatrix, cutoff: int, budget_mb: int = BUDGET_MB, use_cache=True) -> GradedNilpotent:
    """
    Returns the graded n⁻ of A up to height `cutoff`.

    Pieces are built on first access. The cache holds one engine per
    (matrix hash, cutoff).

    Raises:
        CutoffTooLargeForBudget: the word tables would exceed `budget_mb`.
    """
    if cutoff < 1:
        raise InvalidInput(f"cutoff must be >= 1, got {cutoff}")
    need = estimate_mb(A.n, cutoff)
    if need > budget_mb:
        raise CutoffTooLargeForBudget(
            f"cutoff {cutoff} at rank {A.n} needs about {need:.0f} MB, budget is {budget_mb} MB",
            estimate_mb=round(need, 1),
            budget_mb=budget_mb,
        )
    key = (A.matrix_hash(), cutoff)
    if use_cache:
        hit = db_dict.get(key)
        if hit is not None:
            logger.debug(f"cache hit for {key[0][:12]} at cutoff {cutoff}")
            return hit
    engine = GradedNilpotent(A, cutoff)
    if use_cache:
        db_dict[key] = engine
    return engine


def _mobius(d: int) -> int:
    exps = factorint(d)
    if any(e > 1 for e in exps.values()):
        return 0
    return -1 if len(exps) % 2 else 1


def necklace_count(x: int, y: int) -> int:
    """(1/(x+y)) Σ_{d | gcd(x,y)} μ(d) C((x+y)/d, x/d)."""
    total = x + y
    if total == 0:
        return 0
    g = math.gcd(x, y)
    s = sum(_mobius(d) * math.comb(total // d, x // d) for d in divisors(g))
    return s // total


def witt_multiplicity(A: BkmCartanMatrix, beta: Grade) -> int:
    """
    Root multiplicity in a rank-2 algebra with free n⁻.

    Raises:
        NotFreeCase: unless A has rank 2, no real node and A_01 != 0.
    """
    if A.n != 2 or A.real_nodes or A[0, 1] == 0:
        raise NotFreeCase("the necklace formula needs rank 2, no real node and A_01 != 0")
    x, y = beta
    if x < 0 or y < 0:
        raise InvalidInput(f"grade must be nonnegative: {tuple(beta)}")
    return necklace_count(x, y)
