"""
Denominators, Verma characters and the Weyl-Kac-Borcherds formula.
"""
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from loguru import logger

from ..cartan import (
    BkmCartanMatrix,
    Grade,
    Weight,
    WeylWord,
    add_grades,
    grades_up_to,
    height,
    negative_type_a,
)
from ..config.settings import THREADS
from ..decorators import log_elapsed
from ..errors import AssertionFailed, CutoffTooLarge, InvalidInput, NotDominant, NotSymmetrizable
from ..lie_engine import GradedNilpotent, build_nilpotent
from .series import FormalCharacter


def _zero_weight(n: int) -> Weight:
    return Weight((0,) * n)


def _times_one_minus(coeffs: Dict[Grade, int], alpha: Grade, cutoff: int) -> Dict[Grade, int]:
    """coeffs · (1 − x^α), truncated."""
    out = dict(coeffs)
    h = height(alpha)
    for g, c in coeffs.items():
        if height(g) + h <= cutoff:
            t = add_grades(g, alpha)
            out[t] = out.get(t, 0) - c
    return out


def independent_subset_sum(A: BkmCartanMatrix, cutoff: int, nodes=None, top: Optional[Weight] = None) -> FormalCharacter:
    """Σ_S (−1)^{|S|} x^{α_S} over independent subsets S of `nodes` (default: all nodes)."""
    nodes = sorted(range(A.n) if nodes is None else nodes)
    coeffs = {}
    for size in range(len(nodes) + 1):
        if size > cutoff:
            break
        for S in combinations(nodes, size):
            if A.is_independent(S):
                g = tuple(1 if i in S else 0 for i in range(A.n))
                coeffs[g] = (-1) ** size
    return FormalCharacter.build(top if top is not None else _zero_weight(A.n), coeffs, cutoff, A.n)


@log_elapsed("denominator")
def denominator(A: BkmCartanMatrix, cutoff: int, nil: Optional[GradedNilpotent] = None, check: bool = True) -> FormalCharacter:
    """
    R = Π_{α ∈ Δ⁺} (1 − x^α)^{m_α} up to height `cutoff`.

    Without real nodes the product is also compared with the independent-subset
    sum; with `check` a mismatch raises AssertionFailed.
    """
    nil = nil or build_nilpotent(A, cutoff)
    if cutoff > nil.cutoff:
        raise CutoffTooLarge(f"cutoff {cutoff} is above the engine cutoff {nil.cutoff}")
    coeffs: Dict[Grade, int] = {(0,) * A.n: 1}
    for alpha in grades_up_to(A.n, cutoff, 1):
        for _ in range(nil.multiplicity(alpha)):
            coeffs = _times_one_minus(coeffs, alpha, cutoff)
    R = FormalCharacter.build(_zero_weight(A.n), coeffs, cutoff, A.n)
    if check and not A.real_nodes:
        other = independent_subset_sum(A, cutoff)
        if other != R:
            diff = sorted(set(R.coeffs.items()) ^ set(other.coeffs.items()))
            raise AssertionFailed("denominator product and independent-subset sum disagree", terms=diff[:20])
    return R


def denominator_for(A: BkmCartanMatrix, cutoff: int, nil: Optional[GradedNilpotent] = None) -> FormalCharacter:
    """The denominator, read off the independent subsets when no node is real."""
    if not A.real_nodes:
        return independent_subset_sum(A, cutoff)
    return denominator(A, cutoff, nil, check=False)


def char_verma(
    A: BkmCartanMatrix,
    lam: Weight,
    cutoff: int,
    nil: Optional[GradedNilpotent] = None,
    check: bool = True,
    threads: int = THREADS,
) -> FormalCharacter:
    """
    e^λ · R⁻¹. With `check` every coefficient is compared with dim U(n⁻)_β.

    Raises:
        AssertionFailed: a coefficient differs from the engine dimension.
    """
    lam = A.weight(lam.pairings)
    if check:
        nil = nil or build_nilpotent(A, cutoff)
    R = denominator_for(A, cutoff, nil)
    out = FormalCharacter.one(A.n, cutoff, top=lam).multiply(R.inverse(), threads)
    if check:
        for beta in grades_up_to(A.n, cutoff):
            if out.coefficient(beta) != nil.env.dim(beta):
                raise AssertionFailed(
                    f"Verma character and U(n⁻) disagree at {beta}",
                    grade=list(beta),
                    series=out.coefficient(beta),
                    engine=nil.env.dim(beta),
                )
    return out


def _weyl_orbit(A: BkmCartanMatrix, nu: Weight, cutoff: int, max_length: Optional[int] = None) -> List[Tuple[Tuple[int, ...], Grade]]:
    """
    (w, ν − wν) for every w in the real Weyl group with ht(ν − wν) ≤ cutoff,
    breadth first by length; ν must be strictly dominant on the real nodes.
    """
    real = sorted(A.real_nodes)
    zero = (0,) * A.n
    seen = {nu.pairings}
    out = []
    frontier = [(nu, (), zero)]
    length = 0
    while frontier:
        out.extend((word, d) for _, word, d in frontier)
        if max_length is not None and length >= max_length:
            break
        nxt = []
        for mu, word, d in frontier:
            for i in real:
                x = mu.pairings[i]
                if x <= 0:
                    continue
                step = tuple(int(x) if j == i else 0 for j in range(A.n))
                d2 = add_grades(d, step)
                if height(d2) > cutoff:
                    continue
                mu2 = A.reflect_weight(i, mu)
                if mu2.pairings in seen:
                    continue
                seen.add(mu2.pairings)
                nxt.append((mu2, (i,) + word, d2))
        frontier = nxt
        length += 1
    logger.debug(f"Weyl orbit: {len(out)} elements below height {cutoff}")
    return out


def wkb_numerator(A: BkmCartanMatrix, lam: Weight, cutoff: int, max_length: Optional[int] = None) -> FormalCharacter:
    """
    Σ_w (−1)^{ℓ(w)} w(S_λ) relative to e^{λ+ρ}; S_λ sums (−1)^{|F|} e^{λ+ρ−α_F}
    over independent sets F of imaginary nodes with λ(α_i^∨) = 0 on F.
    """
    lam = A.weight(lam.pairings)
    if not A.is_symmetrizable:
        raise NotSymmetrizable("the Weyl-Kac-Borcherds formula needs a symmetrizable matrix")
    if not A.cone_membership(lam).in_P_plus:
        raise NotDominant(f"λ = {lam.to_dict()['pairings']} is not dominant integral")
    nu = Weight(tuple(x + A.diag(i) / 2 for i, x in enumerate(lam.pairings)))
    flat = sorted(i for i in A.imaginary_nodes if lam.pairings[i] == 0)
    families = []
    for size in range(len(flat) + 1):
        for F in combinations(flat, size):
            if A.is_independent(F):
                families.append((size, tuple(1 if i in F else 0 for i in range(A.n))))
    coeffs: Dict[Grade, int] = {}
    for word, d in _weyl_orbit(A, nu, cutoff, max_length):
        w = WeylWord(word)
        for size, alpha_F in families:
            g = add_grades(d, w.apply_root(A, alpha_F)) if size else d
            if any(c < 0 for c in g):
                raise AssertionFailed(f"w(α_F) left the positive cone at {g}")
            if height(g) <= cutoff:
                coeffs[g] = coeffs.get(g, 0) + (-1) ** (len(word) + size)
    return FormalCharacter.build(lam, coeffs, cutoff, A.n)


@log_elapsed("char_wkb")
def char_wkb(
    A: BkmCartanMatrix,
    lam: Weight,
    cutoff: int,
    nil: Optional[GradedNilpotent] = None,
    max_length: Optional[int] = None,
    threads: int = THREADS,
) -> FormalCharacter:
    """
    Character of L(λ), λ dominant integral, as the Weyl-Kac-Borcherds
    numerator divided by R.

    Raises:
        NotDominant: λ is not in P⁺.
    """
    num = wkb_numerator(A, lam, cutoff, max_length)
    return num.multiply(denominator_for(A, cutoff, nil).inverse(), threads)


def _hole_union_numerator(supports: List[frozenset], independent) -> Dict[frozenset, int]:
    """
    For each independent union U of distinct minimal supports, Σ (−1)^r over
    the families H_1, …, H_r with H_1 ∪ … ∪ H_r = U.
    """
    table: Dict[frozenset, int] = {frozenset(): 1}
    for H in supports:
        update = dict(table)
        for U, c in table.items():
            V = U | H
            if independent(V):
                update[V] = update.get(V, 0) - c
        table = update
    return {U: c for U, c in table.items() if c}


@log_elapsed("char_thmD")
def char_thmD(n: int, hs, cutoff: int, threads: int = THREADS) -> FormalCharacter:
    """
    Character of M(ρ)/⟨holes⟩ over A(n): the numerator sums, over the
    {0,2}-vectors 2·1_U, the signed count of families of minimal holes covering U.

    Raises:
        InvalidInput: the hole set is not over (A(n), ρ).
    """
    A = negative_type_a(n)
    if hs.A != A:
        raise InvalidInput(f"the hole set is not over A({n})")
    if hs.lam != A.weyl_vector():
        raise InvalidInput("the hole set is not at λ = ρ")
    supports = [h.support for h in hs.minimal().sorted_holes()]
    table = _hole_union_numerator(supports, A.is_independent)
    coeffs = {tuple(2 if i in U else 0 for i in range(n)): c for U, c in table.items()}
    num = FormalCharacter.build(hs.lam, coeffs, cutoff, n)
    return num.multiply(independent_subset_sum(A, cutoff).inverse(), threads)
