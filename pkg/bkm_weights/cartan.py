"""
Cartan data of a Borcherds-Kac-Moody algebra.

Nodes are indexed from 0. A weight is stored only through its coroot
pairings λ(α_i^∨); a root sum is a tuple of nonnegative integers over the
simple roots. The null directions of the Cartan subalgebra never enter any
computation here and are not modelled.
"""
from collections import deque
from enum import Enum
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from attrs import define, field, frozen

from .errors import InvalidInput, NotSymmetrizable, RejectNotBkm
from .helper import format_rational, json_dumps, parse_rational, sha256_hex

Grade = Tuple[int, ...]


class NodeType(str, Enum):
    REAL = "Real"
    HEISENBERG = "Heisenberg"
    NEGATIVE = "Negative"


class RootSum(tuple):
    """An element of ℤ≥0Π, stored as its coefficient tuple."""

    def __new__(cls, coeffs: Iterable[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if any(c < 0 for c in coeffs):
            raise InvalidInput(f"root sum coefficients must be >= 0: {coeffs}")
        return super().__new__(cls, coeffs)

    @classmethod
    def zero(cls, n: int) -> "RootSum":
        return cls((0,) * n)

    @classmethod
    def simple(cls, n: int, i: int, k: int = 1) -> "RootSum":
        return cls(k if j == i else 0 for j in range(n))

    @property
    def height(self) -> int:
        return sum(self)

    @property
    def support(self) -> FrozenSet[int]:
        return frozenset(i for i, c in enumerate(self) if c)

    def plus(self, other: Sequence[int]) -> "RootSum":
        return RootSum(a + b for a, b in zip(self, other))

    def minus(self, other: Sequence[int]) -> "RootSum":
        return RootSum(a - b for a, b in zip(self, other))

    def dominated_by(self, other: Sequence[int]) -> bool:
        return dominated(self, other)


def height(grade: Sequence[int]) -> int:
    return sum(grade)


def support(grade: Sequence[int]) -> FrozenSet[int]:
    return frozenset(i for i, c in enumerate(grade) if c)


def add_grades(a: Sequence[int], b: Sequence[int]) -> Grade:
    return tuple(x + y for x, y in zip(a, b))


def sub_grades(a: Sequence[int], b: Sequence[int]) -> Grade:
    return tuple(x - y for x, y in zip(a, b))


def dominated(a: Sequence[int], b: Sequence[int]) -> bool:
    """a ⪯ b coefficientwise."""
    return all(x <= y for x, y in zip(a, b))


def grades_up_to(n: int, cutoff: int, min_height: int = 0) -> List[Grade]:
    """All grades of height in [min_height, cutoff], sorted by (height, lex)."""
    out = []
    for h in range(min_height, cutoff + 1):
        out.extend(_compositions(h, n))
    return out


def _compositions(total: int, parts: int) -> List[Grade]:
    if parts == 0:
        return [()] if total == 0 else []
    if parts == 1:
        return [(total,)]
    out = []
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return sorted(out)


@frozen
class Weight:
    pairings: Tuple[Fraction, ...] = field(converter=lambda p: tuple(parse_rational(x) for x in p))

    def __len__(self):
        return len(self.pairings)

    def __getitem__(self, i):
        return self.pairings[i]

    def __iter__(self):
        return iter(self.pairings)

    def to_dict(self):
        return {"pairings": [format_rational(x) for x in self.pairings]}

    @classmethod
    def from_dict(cls, data) -> "Weight":
        if isinstance(data, dict):
            data = data.get("pairings", [])
        return cls(data)


@frozen
class ConeReport:
    in_P_plus: bool
    in_P_pm: bool
    J_lambda: FrozenSet[int]
    powers: Dict[int, int]

    def to_dict(self):
        return {
            "in_P_plus": self.in_P_plus,
            "in_P_pm": self.in_P_pm,
            "J_lambda": sorted(self.J_lambda),
            "powers": {str(i): m for i, m in sorted(self.powers.items())},
        }


@define(frozen=True)
class BkmCartanMatrix:
    entries: Tuple[Tuple[Fraction, ...], ...]
    node_types: Tuple[NodeType, ...]
    symmetrizer_or_none: Optional[Tuple[Fraction, ...]]
    labels: Optional[Tuple[str, ...]] = None

    # construction

    @classmethod
    def from_raw(cls, raw, labels=None) -> "BkmCartanMatrix":
        return validate_matrix(raw, labels=labels)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def diag(self, i: int) -> Fraction:
        return self.entries[i][i]

    def is_real(self, i: int) -> bool:
        return self.node_types[i] is NodeType.REAL

    @property
    def real_nodes(self) -> FrozenSet[int]:
        return frozenset(i for i, t in enumerate(self.node_types) if t is NodeType.REAL)

    @property
    def imaginary_nodes(self) -> FrozenSet[int]:
        return frozenset(range(self.n)) - self.real_nodes

    @property
    def is_symmetrizable(self) -> bool:
        return self.symmetrizer_or_none is not None

    @property
    def symmetrizer(self) -> Tuple[Fraction, ...]:
        if self.symmetrizer_or_none is None:
            raise NotSymmetrizable("no positive d with d_i A_ij = d_j A_ji exists")
        return self.symmetrizer_or_none

    def adjacent(self, i: int, j: int) -> bool:
        return i != j and self.entries[i][j] != 0

    def neighbours(self, i: int) -> List[int]:
        return [j for j in range(self.n) if self.adjacent(i, j)]

    # weights and roots

    def weight(self, pairings: Iterable) -> Weight:
        w = Weight(tuple(pairings))
        if len(w) != self.n:
            raise InvalidInput(f"weight has {len(w)} pairings, matrix has {self.n} nodes")
        return w

    def weyl_vector(self) -> Weight:
        return Weight(tuple(self.entries[i][i] / 2 for i in range(self.n)))

    def fundamental_weight(self, i: int) -> Weight:
        return Weight(tuple(1 if j == i else 0 for j in range(self.n)))

    def subtract_roots(self, lam: Weight, beta: Sequence[int]) -> Weight:
        """(λ−β)(α_i^∨) = λ(α_i^∨) − Σ_j β_j A_ij."""
        self._check_grade(beta)
        return Weight(
            tuple(
                lam.pairings[i] - sum(b * self.entries[i][j] for j, b in enumerate(beta) if b)
                for i in range(self.n)
            )
        )

    def root_pairing(self, beta: Sequence[int], i: int) -> Fraction:
        """β(α_i^∨) = Σ_j β_j A_ij."""
        return sum((b * self.entries[i][j] for j, b in enumerate(beta) if b), Fraction(0))

    def bilinear_form(self, beta: Sequence[int], gamma: Sequence[int]) -> Fraction:
        d = self.symmetrizer
        return sum(
            (d[i] * self.entries[i][j] * bi * gj
             for i, bi in enumerate(beta) if bi
             for j, gj in enumerate(gamma) if gj),
            Fraction(0),
        )

    def weight_root_form(self, lam: Weight, beta: Sequence[int]) -> Fraction:
        """(λ, β) = Σ_i β_i d_i λ(α_i^∨)."""
        d = self.symmetrizer
        return sum((b * d[i] * lam.pairings[i] for i, b in enumerate(beta) if b), Fraction(0))

    def bilinear_residual(self, lam: Weight, beta: Sequence[int]) -> Fraction:
        """(λ+2ρ+μ, λ−μ) for μ = λ−β, i.e. 2(λ+ρ, β) − (β, β)."""
        self._check_grade(beta)
        shifted = Weight(tuple(x + self.entries[i][i] / 2 for i, x in enumerate(lam.pairings)))
        return 2 * self.weight_root_form(shifted, beta) - self.bilinear_form(beta, beta)

    def reflect_weight(self, i: int, lam: Weight) -> Weight:
        self._check_real(i)
        x = lam.pairings[i]
        return Weight(tuple(lam.pairings[j] - x * self.entries[j][i] for j in range(self.n)))

    def reflect_root(self, i: int, beta: Sequence[int]) -> Tuple[int, ...]:
        """s_i(β) = β − β(α_i^∨)α_i, as an integer vector that may have negative entries."""
        self._check_real(i)
        c = self.root_pairing(beta, i)
        out = list(beta)
        out[i] = int(out[i] - c)
        return tuple(out)

    def dot_reflect(self, i: int, lam: Weight) -> Weight:
        """s_i·λ = s_i(λ+ρ)−ρ."""
        self._check_real(i)
        x = lam.pairings[i] + 1
        return Weight(tuple(lam.pairings[j] - x * self.entries[j][i] for j in range(self.n)))

    # cones

    def cone_membership(self, lam: Weight) -> ConeReport:
        J, powers = set(), {}
        for i in range(self.n):
            a, x = self.entries[i][i], lam.pairings[i]
            if a == 0:
                if x == 0:
                    J.add(i)
                    powers[i] = 1
                continue
            q = 2 * x / a
            if q.denominator == 1 and q >= 0:
                J.add(i)
                powers[i] = int(q) + 1
        in_plus = all(
            x >= 0 and (x.denominator == 1 or not self.is_real(i))
            for i, x in enumerate(lam.pairings)
        )
        return ConeReport(
            in_P_plus=in_plus,
            in_P_pm=len(J) == self.n,
            J_lambda=frozenset(J),
            powers=powers,
        )

    # Dynkin graph

    def dynkin_components(self, S: Iterable[int]) -> List[Tuple[int, ...]]:
        S = set(S)
        seen, comps = set(), []
        for start in sorted(S):
            if start in seen:
                continue
            comp, queue = [], deque([start])
            seen.add(start)
            while queue:
                i = queue.popleft()
                comp.append(i)
                for j in self.neighbours(i):
                    if j in S and j not in seen:
                        seen.add(j)
                        queue.append(j)
            comps.append(tuple(sorted(comp)))
        return comps

    def is_independent(self, S: Iterable[int]) -> bool:
        S = sorted(set(S))
        return not any(self.adjacent(i, j) for k, i in enumerate(S) for j in S[k + 1:])

    def is_connected_support(self, beta: Sequence[int]) -> bool:
        return len(self.dynkin_components(support(beta))) == 1

    # serialization

    def to_dict(self):
        data = {"A": [[format_rational(x) for x in row] for row in self.entries]}
        if self.labels:
            data["labels"] = list(self.labels)
        return data

    def matrix_hash(self) -> str:
        return sha256_hex(json_dumps(self.to_dict(), indent_2=False))

    def describe(self):
        data = {"types": [t.value for t in self.node_types]}
        if self.is_symmetrizable:
            data["symmetrizer"] = [format_rational(x) for x in self.symmetrizer]
        else:
            data["symmetrizer"] = None
        return data

    def _check_grade(self, beta: Sequence[int]):
        if len(beta) != self.n:
            raise InvalidInput(f"root sum has {len(beta)} coefficients, matrix has {self.n} nodes")

    def _check_real(self, i: int):
        if not self.is_real(i):
            raise InvalidInput(f"node {i} is not real, s_{i} is undefined")


@define(frozen=True)
class WeylWord:
    """s_{w[0]} s_{w[1]} ... ; applied right to left."""

    word: Tuple[int, ...] = field(converter=tuple)

    @property
    def length(self) -> int:
        return len(self.word)

    def validate(self, A: BkmCartanMatrix) -> "WeylWord":
        bad = [i for i in self.word if not A.is_real(i)]
        if bad:
            raise InvalidInput(f"Weyl word uses non-real nodes {bad}")
        return self

    def apply(self, A: BkmCartanMatrix, lam: Weight) -> Weight:
        for i in reversed(self.word):
            lam = A.reflect_weight(i, lam)
        return lam

    def apply_root(self, A: BkmCartanMatrix, beta: Sequence[int]) -> Tuple[int, ...]:
        for i in reversed(self.word):
            beta = A.reflect_root(i, beta)
        return tuple(beta)


def validate_matrix(raw, labels=None) -> BkmCartanMatrix:
    """
    Classifies a square rational matrix as a BKM-Cartan matrix.

    Args:
        raw: rows of ints, Fractions or "p/q" strings, or a dict {"A": rows, "labels": [...]}.
        labels: optional node labels.

    Returns:
        BkmCartanMatrix with node types and, when one exists, a symmetrizer
        normalized to min 1 on every Dynkin component.

    Raises:
        RejectNotBkm: naming the violated rule.
    """
    if isinstance(raw, dict):
        labels = labels or raw.get("labels")
        raw = raw.get("A")
    if not raw or not all(isinstance(r, (list, tuple)) for r in raw):
        raise RejectNotBkm("square", "matrix must be a non-empty list of rows")
    n = len(raw)
    if any(len(r) != n for r in raw):
        raise RejectNotBkm("square", f"matrix must be {n}x{n}")
    A = tuple(tuple(parse_rational(x) for x in row) for row in raw)

    types = []
    for i in range(n):
        a = A[i][i]
        if a == 2:
            types.append(NodeType.REAL)
        elif a == 0:
            types.append(NodeType.HEISENBERG)
        elif a < 0:
            types.append(NodeType.NEGATIVE)
        else:
            raise RejectNotBkm("diagonal", f"A[{i}][{i}]={format_rational(a)} is neither 2 nor <= 0")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            if A[i][j] > 0:
                raise RejectNotBkm("off-diagonal", f"A[{i}][{j}] > 0")
            if types[i] is NodeType.REAL and A[i][j].denominator != 1:
                raise RejectNotBkm("real-row-integral", f"A[{i}][{j}] must be an integer for real node {i}")
            if (A[i][j] == 0) != (A[j][i] == 0):
                raise RejectNotBkm("zero-symmetric", f"A[{i}][{j}]=0 iff A[{j}][{i}]=0 fails")

    if labels is not None:
        labels = tuple(str(x) for x in labels)
        if len(labels) != n:
            raise InvalidInput("labels must have one entry per node")

    return BkmCartanMatrix(
        entries=A,
        node_types=tuple(types),
        symmetrizer_or_none=_symmetrizer(A),
        labels=labels,
    )


def _symmetrizer(A) -> Optional[Tuple[Fraction, ...]]:
    n = len(A)
    d: List[Optional[Fraction]] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        comp, queue = [root], deque([root])
        while queue:
            i = queue.popleft()
            for j in range(n):
                if j == i or A[i][j] == 0:
                    continue
                # d_i A_ij = d_j A_ji
                value = d[i] * A[i][j] / A[j][i]
                if d[j] is None:
                    d[j] = value
                    comp.append(j)
                    queue.append(j)
                elif d[j] != value:
                    return None
        low = min(d[i] for i in comp)
        for i in comp:
            d[i] = d[i] / low
    return tuple(d)


def negative_type_a(n: int) -> BkmCartanMatrix:
    """A(n): -2 on the diagonal, -1 between path neighbours."""
    rows = [[-2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(n)] for i in range(n)]
    return validate_matrix(rows)


def rank2(b, a, c=None, d=None) -> BkmCartanMatrix:
    """A(b,a,c,d) = [[-b,-a],[-c,-d]]; A(b,a) abbreviates A(b,a,a,b)."""
    c = a if c is None else c
    d = b if d is None else d
    return validate_matrix([[-parse_rational(b), -parse_rational(a)], [-parse_rational(c), -parse_rational(d)]])


def parse_matrix(value) -> BkmCartanMatrix:
    from .helper import load_json_arg

    if isinstance(value, BkmCartanMatrix):
        return value
    return validate_matrix(load_json_arg(value))


def parse_weight(value, A: BkmCartanMatrix) -> Weight:
    """Accepts a list of pairings, {"pairings": [...]}, or the strings "rho" / "0"."""
    from .helper import load_json_arg

    if isinstance(value, Weight):
        return A.weight(value.pairings)
    if isinstance(value, str) and value.strip().lower() in ("rho", "ρ"):
        return A.weyl_vector()
    if isinstance(value, str) and value.strip() == "0":
        return A.weight([0] * A.n)
    data = load_json_arg(value)
    if isinstance(data, dict):
        data = data.get("pairings", [])
    return A.weight(data)
