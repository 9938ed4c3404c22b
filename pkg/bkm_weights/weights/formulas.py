"""
Closed-form weight sets of highest weight modules.

Weights are reported as root sums β with λ−β ∈ wt V, height-truncated and
sorted by (height, lex).
"""
from concurrent.futures import ThreadPoolExecutor
from itertools import product
from typing import Iterable, List, Optional, Sequence, Set

from loguru import logger

from ..cartan import (
    BkmCartanMatrix,
    Grade,
    Weight,
    add_grades,
    grades_up_to,
    height,
    support,
)
from ..config.settings import THREADS
from ..decorators import log_elapsed
from ..errors import AssertionFailed, InvalidHole, InvalidInput, NonIntegralDifference
from ..helper import grade_key, parse_rational
from ..lie_engine import build_nilpotent
from .holes import Hole, HoleSet


def as_grade(beta: Iterable, n: int) -> Grade:
    """Validates λ−μ given by its simple-root coefficients."""
    out = []
    for b in beta:
        b = parse_rational(b)
        if b.denominator != 1:
            raise NonIntegralDifference(f"λ−μ has a non-integral coefficient {b}")
        if b < 0:
            raise InvalidInput(f"μ is not below λ: coefficient {b} < 0")
        out.append(int(b))
    if len(out) != n:
        raise InvalidInput(f"root sum has {len(out)} coefficients, expected {n}")
    return tuple(out)


def independent_weight_in_wtV(hs: HoleSet, beta: Sequence) -> bool:
    """
    For independent supp(β): λ−β ∈ wt V iff no hole grade is dominated by β,
    since M(λ)_{λ−β} is one-dimensional.
    """
    beta = as_grade(beta, hs.n)
    if not hs.A.is_independent(support(beta)):
        raise InvalidInput(f"supp({list(beta)}) is not independent")
    return not hs.kills(beta)


def dominant_representative(A: BkmCartanMatrix, lam: Weight, beta: Grade, nodes: Iterable[int]) -> Optional[Grade]:
    """
    Applies s_i (i ∈ nodes) to μ = λ−β while μ(α_i^∨) < 0. Returns the root sum of
    the resulting weight, or None once it leaves λ − ℤ≥0Π.
    """
    nodes = sorted(nodes)
    beta = list(beta)
    mu = A.subtract_roots(lam, beta)
    while True:
        for i in nodes:
            x = mu.pairings[i]
            if x < 0:
                if x.denominator != 1:
                    return None
                beta[i] += int(x)
                if beta[i] < 0:
                    return None
                mu = A.reflect_weight(i, mu)
                break
        else:
            return tuple(beta)


def _c2_candidates(A: BkmCartanMatrix, beta: Grade) -> Iterable[Grade]:
    """μ′ for every choice of one node per larger Dynkin component of supp(β)."""
    comps = A.dynkin_components(support(beta))
    base = [0] * A.n
    larger = []
    for comp in comps:
        if len(comp) == 1:
            base[comp[0]] = beta[comp[0]]
        else:
            larger.append(comp)
    for choice in product(*larger):
        out = list(base)
        for j in choice:
            out[j] = 1
        yield tuple(out)


def thmA_membership(hs: HoleSet, beta: Sequence) -> bool:
    """
    λ−β ∈ wt 𝕄(λ, 𝓗) for nice 𝓗.

    The weight is first moved to its I_V-dominant representative, then (C2) is
    decided by an exhaustive search over one node per component.
    """
    if not hs.is_nice():
        raise InvalidHole("the hole set is not nice")
    A = hs.A
    beta = as_grade(beta, A.n)
    rep = dominant_representative(A, hs.lam, beta, hs.integrable_nodes())
    if rep is None:
        return False
    return any(not hs.kills(cand) for cand in _c2_candidates(A, rep))


def _collect(predicate, n: int, cutoff: int, threads: int) -> List[Grade]:
    if threads <= 1:
        return [b for b in grades_up_to(n, cutoff) if predicate(b)]
    levels = [grades_up_to(n, h, h) for h in range(cutoff + 1)]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(lambda level: [b for b in level if predicate(b)], levels)
    return sorted((b for part in parts for b in part), key=grade_key)


@log_elapsed("thmA_enumerate")
def thmA_enumerate(hs: HoleSet, cutoff: int, threads: int = THREADS) -> List[Grade]:
    if not hs.is_nice():
        raise InvalidHole("the hole set is not nice")
    nodes = hs.integrable_nodes()
    A = hs.A

    def member(beta):
        rep = dominant_representative(A, hs.lam, beta, nodes)
        return rep is not None and any(not hs.kills(c) for c in _c2_candidates(A, rep))

    out = _collect(member, A.n, cutoff, threads)
    logger.debug(f"Theorem A: {len(out)} weights up to height {cutoff}")
    return out


def simple_weight_formula(A: BkmCartanMatrix, lam: Weight, cutoff: int) -> List[Grade]:
    """
    wt L(λ) from the specialized formula: after moving to the dominant
    representative for the integrable real nodes, a singleton component {j}
    needs j ∉ J_λ or c_j < M_j, and a larger component needs a node j with
    λ(α_j^∨) ≠ 0.
    """
    if cutoff < 0:
        return []
    cone = A.cone_membership(lam)
    nodes = cone.J_lambda & A.real_nodes

    def member(beta):
        rep = dominant_representative(A, lam, beta, nodes)
        if rep is None:
            return False
        for comp in A.dynkin_components(support(rep)):
            if len(comp) == 1:
                j = comp[0]
                if j in cone.J_lambda and rep[j] >= cone.powers[j]:
                    return False
            elif all(lam.pairings[j] == 0 for j in comp):
                return False
        return True

    return [b for b in grades_up_to(A.n, cutoff) if member(b)]


def _nice_completions(hs: HoleSet) -> List[HoleSet]:
    """
    Nice hole sets containing 𝓗 that are maximal among those: each non-nice
    minimal hole gains a real singleton or its imaginary part below it.
    """
    real = hs.A.real_nodes
    bad = [h for h in hs.minimal().sorted_holes() if h.support & real and len(h.support) > 1]
    if not bad:
        return [hs]
    options = []
    for h in bad:
        opts = [Hole({r: h.power(r)}) for r in sorted(h.support & real)]
        imag = h.restrict(h.support - real)
        if imag.powers and imag.height > 0:
            opts.append(imag)
        options.append(opts)
    return [hs.with_holes(choice) for choice in product(*options)]


@log_elapsed("thmB_weights")
def thmB_weights(hs: HoleSet, cutoff: int, check: bool = True, threads: int = THREADS) -> List[Grade]:
    """
    wt V for an arbitrary hole set, as the union over non-holes (H, f_H) of the
    weights of L(λ − Σ f_H(h)α_h). With `check`, the union over nice
    completions of 𝓗 is computed too and must agree.

    Raises:
        AssertionFailed: the two formulas disagree.
    """
    A, lam = hs.A, hs.lam
    found: Set[Grade] = set()
    for hole in hs.non_holes(cutoff):
        g = hole.grade(A.n)
        shifted = A.subtract_roots(lam, g)
        for beta in simple_weight_formula(A, shifted, cutoff - height(g)):
            found.add(add_grades(beta, g))
    out = sorted(found, key=grade_key)
    if check:
        other = thmB_first_formula(hs, cutoff, threads)
        if other != out:
            diff = sorted(set(other) ^ found, key=grade_key)
            raise AssertionFailed("the two weight formulas for V disagree", grades=[list(b) for b in diff[:20]])
    return out


def thmB_first_formula(hs: HoleSet, cutoff: int, threads: int = THREADS) -> List[Grade]:
    found: Set[Grade] = set()
    for nice in _nice_completions(hs):
        found.update(thmA_enumerate(nice, cutoff, threads))
    return sorted(found, key=grade_key)


def _root_monoid(roots: List[Grade], n: int, cutoff: int) -> Set[Grade]:
    out = {(0,) * n}
    frontier = [(0,) * n]
    while frontier:
        nxt = []
        for g in frontier:
            for r in roots:
                s = add_grades(g, r)
                if height(s) <= cutoff and s not in out:
                    out.add(s)
                    nxt.append(s)
        frontier = nxt
    return out


@log_elapsed("minkowski_check")
def minkowski_check(hs: HoleSet, cutoff: int, roots: Optional[List[Grade]] = None, nil=None) -> bool:
    """
    wt V = (wt V ∩ (λ − ℤ≥0Π_{J_V})) − ℤ≥0(Δ⁺ ∖ Δ⁺_{J_V}) up to the cutoff.

    `roots` defaults to the positive roots of the graded n⁻ engine `nil`.
    """
    A = hs.A
    if roots is None:
        if nil is None:
            nil = build_nilpotent(A, cutoff)
        roots = nil.positive_roots()
    JV = hs.J_V
    lhs = set(thmA_enumerate(hs, cutoff))
    base = [b for b in lhs if support(b) <= JV]
    outer = [r for r in roots if not support(r) <= JV]
    monoid = _root_monoid(outer, A.n, cutoff)
    rhs = {add_grades(b, g) for b in base for g in monoid if height(b) + height(g) <= cutoff}
    if lhs != rhs:
        logger.info(f"Minkowski difference fails on {len(lhs ^ rhs)} grades")
    return lhs == rhs


def free_directions(A: BkmCartanMatrix, lam: Weight) -> List[int]:
    """Nodes outside J_λ: weights of any highest weight module are free along them."""
    return sorted(set(range(A.n)) - A.cone_membership(lam).J_lambda)

