"""
Height-truncated formal characters.

A character Σ c(μ)e^μ with top weight λ is stored relative to its top: the
coefficient of e^{λ−β} sits at the grade β. Products add tops and grades and
drop every grade above the smaller cutoff.
"""
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple

from attrs import define, field

from ..cartan import Grade, Weight, add_grades, dominated, grades_up_to, height, sub_grades
from ..config.settings import THREADS
from ..console import character_table
from ..errors import InvalidInput
from ..helper import format_rational, grade_key, parse_rational


def _clean(coeffs) -> Dict[Grade, int]:
    if isinstance(coeffs, dict):
        coeffs = coeffs.items()
    out = {}
    for g, c in coeffs:
        c = Fraction(c)
        if c:
            out[tuple(int(x) for x in g)] = int(c) if c.denominator == 1 else c
    return out


@define(frozen=True)
class FormalCharacter:
    top: Weight
    coeffs: Dict[Grade, int] = field(converter=_clean)
    cutoff: int
    rank: int
    source: str = field(default="formula", eq=False)

    def __attrs_post_init__(self):
        for g in self.coeffs:
            if len(g) != self.rank:
                raise InvalidInput(f"grade {g} has the wrong length for rank {self.rank}")
            if height(g) > self.cutoff:
                raise InvalidInput(f"grade {g} is above the cutoff {self.cutoff}")

    # construction

    @classmethod
    def build(cls, top: Weight, coeffs, cutoff: int, rank: int, source: str = "formula") -> "FormalCharacter":
        """Like the constructor, but silently drops grades above the cutoff."""
        kept = [(g, c) for g, c in _clean(coeffs).items() if height(g) <= cutoff]
        return cls(top, kept, cutoff, rank, source)

    @classmethod
    def one(cls, rank: int, cutoff: int, top: Optional[Weight] = None) -> "FormalCharacter":
        top = top if top is not None else Weight((0,) * rank)
        return cls(top, {(0,) * rank: 1}, cutoff, rank)

    @classmethod
    def from_multiplicities(cls, top: Weight, mults: Dict[Grade, int], cutoff: int, source: str = "oracle"):
        rank = len(top)
        return cls.build(top, mults, cutoff, rank, source)

    @property
    def zero(self) -> Grade:
        return (0,) * self.rank

    # arithmetic

    def _check_compatible(self, other: "FormalCharacter"):
        if not isinstance(other, FormalCharacter):
            raise InvalidInput(f"cannot combine a character with {type(other).__name__}")
        if other.rank != self.rank:
            raise InvalidInput(f"rank mismatch: {self.rank} vs {other.rank}")

    def __add__(self, other: "FormalCharacter") -> "FormalCharacter":
        self._check_compatible(other)
        if other.top != self.top:
            raise InvalidInput("characters with different top weights cannot be added")
        cutoff = min(self.cutoff, other.cutoff)
        out = dict(self.coeffs)
        for g, c in other.coeffs.items():
            out[g] = out.get(g, 0) + c
        return FormalCharacter.build(self.top, out, cutoff, self.rank)

    def __neg__(self) -> "FormalCharacter":
        return self.scale(-1)

    def __sub__(self, other: "FormalCharacter") -> "FormalCharacter":
        return self + (-other)

    def scale(self, k) -> "FormalCharacter":
        k = parse_rational(k)
        return FormalCharacter(self.top, {g: c * k for g, c in self.coeffs.items()}, self.cutoff, self.rank)

    def __mul__(self, other: "FormalCharacter") -> "FormalCharacter":
        return self.multiply(other)

    def multiply(self, other: "FormalCharacter", threads: int = THREADS) -> "FormalCharacter":
        self._check_compatible(other)
        cutoff = min(self.cutoff, other.cutoff)
        top = Weight(tuple(x + y for x, y in zip(self.top.pairings, other.top.pairings)))
        right = list(other.coeffs.items())

        def partial(chunk):
            out: Dict[Grade, int] = {}
            for g1, c1 in chunk:
                h1 = height(g1)
                for g2, c2 in right:
                    if h1 + height(g2) <= cutoff:
                        g = add_grades(g1, g2)
                        out[g] = out.get(g, 0) + c1 * c2
            return out

        left = list(self.coeffs.items())
        if threads <= 1 or len(left) < 2 * threads:
            total = partial(left)
        else:
            chunks = [left[k::threads] for k in range(threads)]
            total = {}
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for part in pool.map(partial, chunks):
                    for g, c in part.items():
                        total[g] = total.get(g, 0) + c
        return FormalCharacter.build(top, total, cutoff, self.rank)

    def inverse(self) -> "FormalCharacter":
        """
        Truncated inverse, by the recurrence on height
        g(β) = −c(0)⁻¹ Σ_{0≠γ⪯β} c(γ) g(β−γ).
        """
        c0 = self.coeffs.get(self.zero, 0)
        if c0 not in (1, -1):
            raise InvalidInput(f"the constant term must be ±1 to invert over ℤ, got {c0}")
        terms = [(g, c) for g, c in self.coeffs.items() if g != self.zero]
        inv: Dict[Grade, int] = {self.zero: c0}
        for beta in grades_up_to(self.rank, self.cutoff, 1):
            total = 0
            for g, c in terms:
                if dominated(g, beta):
                    total += c * inv.get(sub_grades(beta, g), 0)
            if total:
                inv[beta] = -c0 * total
        top = Weight(tuple(-x for x in self.top.pairings))
        return FormalCharacter(top, inv, self.cutoff, self.rank)

    def __truediv__(self, other: "FormalCharacter") -> "FormalCharacter":
        return self * other.inverse()

    def truncate(self, cutoff: int) -> "FormalCharacter":
        cutoff = min(cutoff, self.cutoff)
        return FormalCharacter.build(self.top, self.coeffs, cutoff, self.rank, self.source)

    def with_source(self, source: str) -> "FormalCharacter":
        return FormalCharacter(self.top, self.coeffs, self.cutoff, self.rank, source)

    # queries

    def coefficient(self, beta: Iterable[int]) -> int:
        beta = tuple(beta)
        if height(beta) > self.cutoff:
            raise InvalidInput(f"grade {beta} is above the cutoff {self.cutoff}")
        return self.coeffs.get(beta, 0)

    def support(self) -> List[Grade]:
        return sorted(self.coeffs, key=grade_key)

    def rows(self) -> List[Tuple[Grade, int]]:
        return [(g, self.coeffs[g]) for g in self.support()]

    # output

    def to_dict(self):
        return {
            "top": self.top.to_dict(),
            "coeffs": [
                {"grade": list(g), "c": c if isinstance(c, int) else format_rational(c)}
                for g, c in self.rows()
            ],
            "cutoff": self.cutoff,
            "source": self.source,
        }

    @classmethod
    def from_dict(cls, data) -> "FormalCharacter":
        try:
            top = Weight.from_dict(data["top"])
            coeffs = [(tuple(t["grade"]), parse_rational(t["c"])) for t in data["coeffs"]]
            cutoff = int(data["cutoff"])
        except (KeyError, TypeError) as e:
            raise InvalidInput(f"malformed character: {e}") from e
        return cls(top, coeffs, cutoff, len(top), data.get("source", "formula"))

    def to_table(self, title: Optional[str] = None):
        return character_table(self, title)
