"""
Holes of a highest weight module and their partial order.

A hole (H, m_H) is an independent support H ⊆ J_λ with powers fixed to M_h on
real and negative nodes and free on Heisenberg nodes. The hole kills the
vector Π_h f_h^{m_H(h)}·m_λ; an independent root sum β is killed exactly when
the hole's grade Σ m_H(h)α_h is dominated by β.
"""
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from attrs import define, field, frozen

from ..cartan import BkmCartanMatrix, ConeReport, Grade, NodeType, Weight, dominated
from ..errors import InvalidHole, InvalidInput


def _powers_converter(value) -> Tuple[Tuple[int, int], ...]:
    if isinstance(value, dict):
        value = value.items()
    return tuple(sorted((int(h), int(m)) for h, m in value))


@frozen
class Hole:
    powers: Tuple[Tuple[int, int], ...] = field(converter=_powers_converter)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(h for h, _ in self.powers)

    def power(self, h: int) -> int:
        return dict(self.powers)[h]

    def grade(self, n: int) -> Grade:
        out = [0] * n
        for h, m in self.powers:
            out[h] = m
        return tuple(out)

    @property
    def height(self) -> int:
        return sum(m for _, m in self.powers)

    def precedes(self, other: "Hole") -> bool:
        """(H′,m′) ⪯ (H,m) iff H′ ⊆ H and m′ ≤ m on H′."""
        mine, theirs = dict(self.powers), dict(other.powers)
        return all(h in theirs and m <= theirs[h] for h, m in mine.items())

    def restrict(self, nodes: Iterable[int]) -> "Hole":
        nodes = set(nodes)
        return Hole({h: m for h, m in self.powers if h in nodes})

    def to_dict(self):
        return {
            "support": sorted(self.support),
            "powers": {str(h): m for h, m in self.powers},
        }

    @classmethod
    def from_dict(cls, data) -> "Hole":
        if isinstance(data, Hole):
            return data
        if "powers" not in data:
            raise InvalidInput(f"hole needs 'powers': {data!r}")
        powers = {int(h): int(m) for h, m in data["powers"].items()}
        support = data.get("support")
        if support is not None and set(int(s) for s in support) != set(powers):
            raise InvalidInput(f"hole support {support} disagrees with its powers")
        return cls(powers)


@define(frozen=True)
class HoleSet:
    """
    A set of holes for the module V = M(λ)/⟨f_H^{m_H}·m_λ⟩ over a fixed (A, λ).

    The set is read as the generators of an upward-closed set; membership
    questions go through `upper_closure_contains`.
    """

    A: BkmCartanMatrix
    lam: Weight
    holes: FrozenSet[Hole] = field(converter=frozenset)
    cap: Optional[int] = None
    cone: ConeReport = field(init=False, eq=False, repr=False)

    def __attrs_post_init__(self):
        object.__setattr__(self, "cone", self.A.cone_membership(self.lam))
        for hole in self.holes:
            self._validate(hole)

    def _validate(self, hole: Hole):
        A, cone = self.A, self.cone
        if not hole.powers:
            raise InvalidHole("a hole needs a nonempty support")
        if not A.is_independent(hole.support):
            raise InvalidHole(f"support {sorted(hole.support)} is not independent")
        outside = hole.support - cone.J_lambda
        if outside:
            raise InvalidHole(f"support nodes {sorted(outside)} are outside J_λ")
        for h, m in hole.powers:
            if A.node_types[h] is NodeType.HEISENBERG:
                if m < 0:
                    raise InvalidHole(f"Heisenberg power at node {h} must be >= 0")
            elif m != cone.powers[h]:
                raise InvalidHole(f"power at node {h} must be M_{h}={cone.powers[h]}, got {m}")
        if hole.height == 0:
            raise InvalidHole("all powers are 0, the hole would kill m_λ")

    @property
    def n(self) -> int:
        return self.A.n

    # construction

    @classmethod
    def for_simple(cls, A: BkmCartanMatrix, lam: Weight, cap: Optional[int] = None) -> "HoleSet":
        """The minimal holes of L(λ): ({i}, M_i) for i ∈ J_λ, with M_i = 1 on Heisenberg nodes."""
        cone = A.cone_membership(lam)
        return cls(A, lam, [Hole({i: cone.powers[i]}) for i in sorted(cone.J_lambda)], cap)

    @classmethod
    def from_dict(cls, A: BkmCartanMatrix, lam: Weight, data) -> "HoleSet":
        if isinstance(data, HoleSet):
            return data
        if isinstance(data, (list, tuple)):
            data = {"holes": data}
        holes = [Hole.from_dict(h) for h in data.get("holes", [])]
        cap = data.get("cap")
        return cls(A, lam, holes, int(cap) if cap is not None else None)

    def with_holes(self, extra: Iterable[Hole]) -> "HoleSet":
        return HoleSet(self.A, self.lam, set(self.holes) | set(extra), self.cap)

    def to_dict(self):
        data = {"holes": [h.to_dict() for h in self.sorted_holes()]}
        if self.cap is not None:
            data["cap"] = self.cap
        return data

    def sorted_holes(self) -> List[Hole]:
        return sorted(self.holes, key=lambda h: (h.height, h.powers))

    # order

    def minimal(self) -> "HoleSet":
        keep = [
            h for h in self.holes
            if not any(g != h and g.precedes(h) for g in self.holes)
        ]
        return HoleSet(self.A, self.lam, keep, self.cap)

    def upper_closure_contains(self, hole: Hole) -> bool:
        return any(g.precedes(hole) for g in self.holes)

    def is_nice(self) -> bool:
        """Every minimal hole is imaginary-supported or a real singleton."""
        real = self.A.real_nodes
        for h in self.minimal().holes:
            if h.support & real and len(h.support) != 1:
                return False
        return True

    def integrable_nodes(self) -> FrozenSet[int]:
        """I_V = {real i : ({i}, λ(α_i^∨)+1) ∈ 𝓗}."""
        out = set()
        for i in self.A.real_nodes:
            x = self.lam.pairings[i]
            if x.denominator == 1 and x >= 0 and self.upper_closure_contains(Hole({i: int(x) + 1})):
                out.add(i)
        return frozenset(out)

    @property
    def J_V(self) -> FrozenSet[int]:
        out = set()
        for h in self.minimal().holes:
            out |= h.support
        return frozenset(out)

    # kills

    def grades(self) -> List[Grade]:
        return [h.grade(self.n) for h in self.sorted_holes()]

    def kills(self, beta: Grade) -> bool:
        """Some hole grade is dominated by β (meaningful for independent β)."""
        return any(dominated(g, beta) for g in self.grades())

    def generators(self) -> Iterator[Tuple[Grade, Dict[Tuple[int, ...], Fraction]]]:
        """(grade, Π_h f_h^{m_H(h)}) pairs, the kill-spec of the higher order Verma module."""
        for h in self.sorted_holes():
            word = tuple(node for node, m in h.powers for _ in range(m))
            yield h.grade(self.n), {word: Fraction(1)}

    # Indep(J_λ)

    def heisenberg_cap(self, cutoff: int) -> int:
        return self.cap or cutoff

    def potential_holes(self, cutoff: int) -> Iterator[Hole]:
        """
        Every (H, m_H) satisfying the support and power conditions with
        height ≤ cutoff; Heisenberg powers range over 1..cap.
        """
        A, cone = self.A, self.cone
        nodes = sorted(cone.J_lambda)
        cap = self.heisenberg_cap(cutoff)
        for size in range(1, len(nodes) + 1):
            for H in combinations(nodes, size):
                if not A.is_independent(H):
                    continue
                choices = [
                    range(1, cap + 1) if A.node_types[h] is NodeType.HEISENBERG else [cone.powers[h]]
                    for h in H
                ]
                for ms in product(*choices):
                    if sum(ms) <= cutoff:
                        yield Hole(dict(zip(H, ms)))

    def non_holes(self, cutoff: int) -> List[Hole]:
        """Potential holes whose grade dominates no hole grade, plus the empty map."""
        grades = self.grades()
        out = [Hole({})]
        for hole in self.potential_holes(cutoff):
            g = hole.grade(self.n)
            if not any(dominated(k, g) for k in grades):
                out.append(hole)
        return out
