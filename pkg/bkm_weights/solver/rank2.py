"""
The rank-2 norm equation.

For λ with powers M_1, M_2 the grade β = Xα_1 + Yα_2 satisfies
2(λ+ρ, β) = (β, β) iff

    cxx·X² + cyy·Y² + cxy·XY + cx·X + cy·Y = 0

with cxx = −d_1A_11, cyy = −d_2A_22, cxy = −2d_1A_12 and
cx = 2d_1(λ_1 + A_11/2), cy = 2d_2(λ_2 + A_22/2). The variant is N when both
nodes are negative, H when one is Heisenberg and R when one is real.
"""
import math
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from attrs import define, field, frozen
from loguru import logger
from sympy import Rational, diophantine, symbols

from ..cartan import BkmCartanMatrix, NodeType, Weight, parse_weight, validate_matrix
from ..errors import AssertionFailed, InvalidInput, NotASolution, PremiseFails, UnboundedWithoutBox
from ..helper import format_rational, json_load, relp

Solution = Tuple[int, int]
Box = Union[int, Tuple[int, int]]


@frozen
class QuadraticInstance:
    variant: str
    cxx: Fraction
    cyy: Fraction
    cxy: Fraction
    cx: Fraction
    cy: Fraction
    powers: Tuple[Optional[int], Optional[int]] = (None, None)
    matrix: Optional[BkmCartanMatrix] = field(default=None, eq=False, repr=False)
    lam: Optional[Weight] = field(default=None, eq=False, repr=False)

    @classmethod
    def from_weight(cls, A: BkmCartanMatrix, lam: Weight) -> "QuadraticInstance":
        if A.n != 2:
            raise InvalidInput(f"the norm equation needs rank 2, got {A.n}")
        lam = A.weight(lam.pairings)
        types = set(A.node_types)
        if types == {NodeType.NEGATIVE}:
            variant = "N"
        elif types == {NodeType.NEGATIVE, NodeType.HEISENBERG}:
            variant = "H"
        elif types == {NodeType.NEGATIVE, NodeType.REAL}:
            variant = "R"
        else:
            raise InvalidInput(f"no norm-equation variant for node types {[t.value for t in A.node_types]}")
        d = A.symmetrizer
        cone = A.cone_membership(lam)
        return cls(
            variant=variant,
            cxx=-d[0] * A[0, 0],
            cyy=-d[1] * A[1, 1],
            cxy=-2 * d[0] * A[0, 1],
            cx=2 * d[0] * (lam.pairings[0] + A[0, 0] / 2),
            cy=2 * d[1] * (lam.pairings[1] + A[1, 1] / 2),
            powers=(cone.powers.get(0), cone.powers.get(1)),
            matrix=A,
            lam=lam,
        )

    @classmethod
    def symmetric(cls, b, a, M1: int, M2: int) -> "QuadraticInstance":
        """A(b,a,a,b) with powers M_1, M_2: b(X² + Y² − M_1X − M_2Y) + 2aXY = 0."""
        b, a = Fraction(b), Fraction(a)
        return cls("N", b, b, 2 * a, -b * M1, -b * M2, (M1, M2))

    def value(self, X, Y) -> Fraction:
        return self.cxx * X * X + self.cyy * Y * Y + self.cxy * X * Y + self.cx * X + self.cy * Y

    def solves(self, sol: Sequence[int]) -> bool:
        return self.value(*sol) == 0

    def swapped(self) -> "QuadraticInstance":
        return QuadraticInstance(
            self.variant, self.cyy, self.cxx, self.cxy, self.cy, self.cx,
            (self.powers[1], self.powers[0]),
        )

    def to_dict(self):
        data = {
            "variant": self.variant,
            "coefficients": {
                k: format_rational(getattr(self, k)) for k in ("cxx", "cyy", "cxy", "cx", "cy")
            },
        }
        if self.powers[0] is not None or self.powers[1] is not None:
            data["powers"] = list(self.powers)
        return data


@define
class SolutionSet:
    solutions: List[Solution]
    complete: bool
    box: Tuple[int, int]
    closed_form: Optional[Dict] = None

    @property
    def interior(self) -> List[Solution]:
        return [s for s in self.solutions if s[0] >= 1 and s[1] >= 1]

    def to_dict(self):
        data = {
            "solutions": [list(s) for s in self.solutions],
            "complete": self.complete,
            "box": list(self.box),
        }
        if self.closed_form is not None:
            data["closed_form"] = self.closed_form
        return data


@frozen
class Classification:
    case: str
    extra: Tuple[Solution, ...]
    swapped: bool

    def to_dict(self):
        return {"case": self.case, "extra": [list(s) for s in self.extra], "swapped": self.swapped}


def _rational_sqrt(q: Fraction) -> Optional[Fraction]:
    if q < 0:
        return None
    p, d = q.numerator, q.denominator
    rp, rd = math.isqrt(p), math.isqrt(d)
    if rp * rp == p and rd * rd == d:
        return Fraction(rp, rd)
    return None


def _solve_for_y(inst: QuadraticInstance, X: int, ymax: int) -> List[int]:
    """Integer roots 0 ≤ Y ≤ ymax of the equation at a fixed X."""
    a = inst.cyy
    b = inst.cxy * X + inst.cy
    c = inst.cxx * X * X + inst.cx * X
    if a == 0:
        if b == 0:
            return list(range(ymax + 1)) if c == 0 else []
        roots = [-c / b]
    else:
        root = _rational_sqrt(b * b - 4 * a * c)
        if root is None:
            return []
        roots = {(-b + root) / (2 * a), (-b - root) / (2 * a)}
    return sorted(int(y) for y in roots if y.denominator == 1 and 0 <= y <= ymax)


def _normalize_box(box: Box) -> Tuple[int, int]:
    if isinstance(box, int):
        box = (box, box)
    bx, by = (int(v) for v in box)
    if bx < 0 or by < 0:
        raise InvalidInput(f"box sides must be nonnegative, got {box}")
    return bx, by


def norm_bound(inst: QuadraticInstance) -> int:
    """X + Y ≤ 2·max(|cx|, |cy|)/min(cxx, cyy) for variant N."""
    low = min(inst.cxx, inst.cyy)
    if inst.variant != "N" or low <= 0 or inst.cxy < 0:
        raise UnboundedWithoutBox(f"no a priori bound for variant {inst.variant}")
    return math.floor(2 * max(abs(inst.cx), abs(inst.cy)) / low)


def lemma_square(b, a, M1: int, M2: int) -> Fraction:
    """Side max(b/2a, 1)·max(M_1, M_2) of the square holding every solution for A(b,a,a,b)."""
    b, a = Fraction(b), Fraction(a)
    return max(b / (2 * a), Fraction(1)) * max(M1, M2)


def _heisenberg_closed_form(inst: QuadraticInstance) -> Dict:
    if inst.cyy == 0:
        free, other = "Y", "X"
        lin, slope, const = inst.cxx, inst.cxy, inst.cx
    else:
        free, other = "X", "Y"
        lin, slope, const = inst.cyy, inst.cxy, inst.cy
    return {
        "families": [
            f"{other} = 0",
            f"{other} = ({format_rational(-const)} − {format_rational(slope)}·{free}) / {format_rational(lin)}",
        ]
    }


def enumerate_solutions_rank2(inst: QuadraticInstance, box: Optional[Box] = None) -> SolutionSet:
    """
    Solutions (X, Y) ∈ ℤ≥0² of the norm equation, sorted.

    Variant N is finite and enumerated completely; an optional box only narrows
    it. Variant H gets its closed form plus the solutions inside the box.
    Variant R needs a box.

    Raises:
        UnboundedWithoutBox: variant R without a box.
    """
    complete = False
    closed = None
    if inst.variant == "N":
        bound = norm_bound(inst)
        bx, by = (bound, bound) if box is None else _normalize_box(box)
        complete = box is None or (bx >= bound and by >= bound)
        bx, by = min(bx, bound), min(by, bound)
    elif inst.variant == "H":
        closed = _heisenberg_closed_form(inst)
        if box is None:
            side = 2 * max(p or 1 for p in inst.powers) + 2
            box = (side, side)
        bx, by = _normalize_box(box)
    else:
        if box is None:
            raise UnboundedWithoutBox("variant R can have infinitely many solutions, pass a box")
        bx, by = _normalize_box(box)
    found = []
    for X in range(bx + 1):
        for Y in _solve_for_y(inst, X, by):
            if not inst.solves((X, Y)):
                raise AssertionFailed(f"({X}, {Y}) does not re-substitute to 0")
            found.append((X, Y))
    logger.debug(f"norm equation {inst.variant}: {len(found)} solutions in [0,{bx}]×[0,{by}]")
    return SolutionSet(sorted(set(found)), complete, (bx, by), closed)


def classify_22(inst: QuadraticInstance) -> Classification:
    """
    Subcase of an instance solved by (2,2), read with M_1 ≥ M_2:
    M_2 = 1 gives C (M_1 even) or D (M_1 odd, extra ((M_1+3)/2, 1));
    otherwise B when some (1, k_2) and (k_1, 1) solve, else A.

    Raises:
        PremiseFails: (2,2) is not a solution.
    """
    if not inst.solves((2, 2)):
        raise PremiseFails("(2,2) does not solve the norm equation")
    M1, M2 = inst.powers
    if M1 is None or M2 is None:
        raise InvalidInput("classification needs the powers M_1, M_2")
    flip = M1 < M2
    work = inst.swapped() if flip else inst
    M1, M2 = work.powers
    sols = enumerate_solutions_rank2(work).solutions

    def orient(s: Solution) -> Solution:
        return (s[1], s[0]) if flip else s

    if M2 == 1:
        if M1 % 2 == 0:
            return Classification("C", (), flip)
        extra = ((M1 + 3) // 2, 1)
        return Classification("D", (orient(extra),) if extra in sols else (), flip)
    k1 = [s for s in sols if s[1] == 1 and s[0] >= 1]
    k2 = [s for s in sols if s[0] == 1 and s[1] >= 1]
    if k1 or k2:
        return Classification("B", tuple(orient(s) for s in sorted(k1 + k2)), flip)
    return Classification("A", (), flip)


def kk_check(inst: QuadraticInstance) -> Dict:
    """
    For a solution (k,k): k is unique and no other solution has both
    coordinates ≥ k.
    """
    sols = enumerate_solutions_rank2(inst).solutions
    diagonal = [s[0] for s in sols if s[0] == s[1] and s[0] > 0]
    if not diagonal:
        return {"k": None, "holds": True}
    k = diagonal[0]
    others = [s for s in sols if s != (k, k) and s[0] >= k and s[1] >= k]
    return {
        "k": k,
        "holds": len(diagonal) == 1 and not others,
        "violations": [list(s) for s in others],
    }


def check_solution(inst: QuadraticInstance, sol: Sequence[int]):
    if not inst.solves(sol):
        raise NotASolution(f"{list(sol)} does not solve the norm equation")


def pell_instance(path: Optional[str] = None) -> QuadraticInstance:
    """The variant R instance shipped in bkm_weights/configs/pell-instance.json."""
    path = path or relp("../configs/pell-instance.json")
    if not Path(path).exists():
        raise InvalidInput(f"no instance file at {path}")
    data = json_load(path)
    A = validate_matrix(data["A"])
    return QuadraticInstance.from_weight(A, parse_weight(data.get("lambda", "rho"), A))


def solve_with_sympy(inst: QuadraticInstance) -> Optional[List[Solution]]:
    """
    Nonnegative solutions from sympy's diophantine solver, or None when it
    answers with a parametric family.
    """
    x, y = symbols("x y", integer=True)
    coeffs = [inst.cxx, inst.cyy, inst.cxy, inst.cx, inst.cy]
    scale = math.lcm(*(c.denominator for c in coeffs))
    cxx, cyy, cxy, cx, cy = (Rational(int(c * scale)) for c in coeffs)
    expr = cxx * x**2 + cyy * y**2 + cxy * x * y + cx * x + cy * y
    out = []
    for sol in diophantine(expr, syms=(x, y)):
        if any(getattr(v, "free_symbols", None) for v in sol):
            return None
        X, Y = int(sol[0]), int(sol[1])
        if X >= 0 and Y >= 0:
            out.append((X, Y))
    return sorted(set(out))
