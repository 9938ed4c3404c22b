"""
Kac-Kazhdan chains.

β is linked to λ when β = Σ n_t β_t with positive roots β_t and positive
integers n_t such that, with ν_t = λ + ρ − Σ_{s<t} n_s β_s,

    2(ν_t, β_t) = n_t (β_t, β_t)

at every step.
"""
from typing import Dict, List, Optional, Set, Tuple

from attrs import define, field, frozen
from loguru import logger

from ..cartan import BkmCartanMatrix, Grade, Weight, dominated, grades_up_to, height, sub_grades
from ..config.settings import KK_SEARCH_BUDGET
from ..errors import InvalidInput
from ..lie_engine import GradedNilpotent, build_nilpotent


@frozen
class KkStep:
    beta: Grade
    n: int

    def to_dict(self):
        return {"beta": list(self.beta), "n": self.n}


@define
class KkResult:
    linked: bool
    witness: Optional[List[KkStep]] = None
    complete: bool = True
    visited: int = 0

    def to_dict(self):
        return {
            "linked": self.linked,
            "witness": [s.to_dict() for s in self.witness] if self.witness else None,
            "complete": self.complete,
            "visited": self.visited,
        }


@define
class _Search:
    A: BkmCartanMatrix
    shifted: Weight
    roots: List[Grade]
    budget: int
    visited: int = 0
    exhausted: bool = False
    dead: Set[Grade] = field(factory=set)

    def step_sizes(self, nu_form, root: Grade, rest: Grade) -> List[int]:
        """Every n ≥ 1 with n·root ⪯ rest and 2(ν, root) = n(root, root)."""
        norm = self.A.bilinear_form(root, root)
        lhs = 2 * nu_form
        if norm != 0:
            n = lhs / norm
            if n.denominator != 1 or n < 1:
                return []
            n = int(n)
            return [n] if dominated(tuple(n * x for x in root), rest) else []
        if lhs != 0:
            return []
        out, n = [], 1
        while dominated(tuple(n * x for x in root), rest):
            out.append(n)
            n += 1
        return out

    def run(self, beta: Grade) -> Optional[List[KkStep]]:
        return self._dfs(beta, beta)

    def _dfs(self, beta: Grade, rest: Grade) -> Optional[List[KkStep]]:
        if height(rest) == 0:
            return []
        if rest in self.dead:
            return None
        self.visited += 1
        if self.visited > self.budget:
            self.exhausted = True
            return None
        done = sub_grades(beta, rest)
        nu = self.A.subtract_roots(self.shifted, done)
        for root in self.roots:
            if not dominated(root, rest):
                continue
            for n in self.step_sizes(self.A.weight_root_form(nu, root), root, rest):
                tail = self._dfs(beta, sub_grades(rest, tuple(n * x for x in root)))
                if tail is not None:
                    return [KkStep(root, n)] + tail
                if self.exhausted:
                    return None
        if not self.exhausted:
            self.dead.add(rest)
        return None


def kk_linked(
    A: BkmCartanMatrix,
    lam: Weight,
    beta: Grade,
    nil: Optional[GradedNilpotent] = None,
    search_budget: int = KK_SEARCH_BUDGET,
) -> KkResult:
    """
    Depth-first search for a Kac-Kazhdan chain from λ down to λ − β.

    Roots are tried in (height, lex) order, so the witness is the least chain
    in that order. When the node budget runs out the result is reported as
    not linked with complete = False.
    """
    beta = tuple(int(b) for b in beta)
    if len(beta) != A.n or any(b < 0 for b in beta):
        raise InvalidInput(f"β must be a nonnegative grade of length {A.n}, got {list(beta)}")
    lam = A.weight(lam.pairings)
    h = height(beta)
    if h == 0:
        return KkResult(True, [])
    nil = nil or build_nilpotent(A, h)
    if nil.cutoff < h:
        nil = build_nilpotent(A, h)
    roots = [g for g in grades_up_to(A.n, h, 1) if dominated(g, beta) and nil.is_root(g)]
    shifted = Weight(tuple(x + A.diag(i) / 2 for i, x in enumerate(lam.pairings)))
    search = _Search(A, shifted, roots, search_budget)
    chain = search.run(beta)
    if search.exhausted:
        logger.warning(f"Kac-Kazhdan search for {list(beta)} stopped after {search.visited} nodes")
        return KkResult(False, None, complete=False, visited=search.visited)
    return KkResult(chain is not None, chain, visited=search.visited)


def kk_linked_set(A: BkmCartanMatrix, lam: Weight, cutoff: int, nil: Optional[GradedNilpotent] = None) -> Dict[Grade, KkResult]:
    """Linked results for every nonzero grade solving the norm equation up to the cutoff."""
    nil = nil or build_nilpotent(A, cutoff)
    out: Dict[Grade, KkResult] = {}
    for g in grades_up_to(A.n, cutoff, 1):
        if A.bilinear_residual(lam, g) == 0:
            out[g] = kk_linked(A, lam, g, nil=nil)
    return out


def chain_residuals(A: BkmCartanMatrix, lam: Weight, chain: List[KkStep]) -> List[Tuple[Grade, int, bool]]:
    """Re-checks every step of a chain: (β_t, n_t, holds)."""
    shifted = Weight(tuple(x + A.diag(i) / 2 for i, x in enumerate(lam.pairings)))
    done = (0,) * A.n
    out = []
    for step in chain:
        nu = A.subtract_roots(shifted, done)
        ok = 2 * A.weight_root_form(nu, step.beta) == step.n * A.bilinear_form(step.beta, step.beta)
        out.append((step.beta, step.n, ok))
        done = tuple(d + step.n * b for d, b in zip(done, step.beta))
    return out
