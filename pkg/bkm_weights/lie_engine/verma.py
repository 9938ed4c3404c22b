"""
Verma modules M(λ) ≅ U(n⁻)·m_λ truncated at a height cutoff.

The raising operator e_k acts on a word f_{w_0}···f_{w_l}·m_λ by
  Σ_{p : w_p = k} (λ − content(w_{p+1}…w_l))(α_k^∨) · (w with position p removed),
the expansion of [e_k, f_j] = δ_kj h_k pushed to the right.
"""
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from attrs import define, field
from loguru import logger

from ..cartan import (
    BkmCartanMatrix,
    Grade,
    Weight,
    dominated,
    grades_up_to,
    height,
    sub_grades,
)
from ..errors import CutoffTooLarge, InvalidInput, NotSymmetrizable
from .linalg import Reducer, Vector, axpy, determinant, matrix_rank, nullspace
from .nilpotent import GradedNilpotent, build_nilpotent
from .words import Word


@define
class MaximalVectors:
    grade: Grade
    dimension: int
    basis: List[Vector] = field(factory=list)

    def to_dict(self):
        return {
            "grade": list(self.grade),
            "dim": self.dimension,
            "basis": [
                [{"word": list(w), "c": c} for w, c in sorted(v.items())] for v in self.basis
            ],
        }


@define
class ShapovalovCheck:
    grade: Grade
    dimension: int
    rank: int
    predicted_singular: bool
    factors: List[Tuple[Grade, int]]

    @property
    def actual_singular(self) -> bool:
        return self.rank < self.dimension

    @property
    def agrees(self) -> bool:
        return self.actual_singular == self.predicted_singular

    def to_dict(self):
        return {
            "grade": list(self.grade),
            "dim": self.dimension,
            "rank": self.rank,
            "singular": self.actual_singular,
            "predicted_singular": self.predicted_singular,
            "agrees": self.agrees,
            "vanishing_factors": [{"root": list(g), "r": r} for g, r in self.factors],
        }


class VermaModel:
    def __init__(self, nil: GradedNilpotent, lam: Weight):
        self.nil = nil
        self.env = nil.env
        self.A = nil.A
        self.n = nil.n
        self.cutoff = nil.cutoff
        self.lam = self.A.weight(lam.pairings)
        self._gram: Dict[Grade, List[List[Fraction]]] = {}
        self._pbw: Dict[Grade, List[Tuple[Tuple[Tuple[Grade, int], ...], Vector]]] = {}
        self._pbw_solver: Dict[Grade, Reducer] = {}
        self._maximal: Dict[Grade, MaximalVectors] = {}

    def _check_height(self, beta: Grade):
        if len(beta) != self.n:
            raise InvalidInput(f"grade {tuple(beta)} has the wrong length for rank {self.n}")
        if any(b < 0 for b in beta):
            raise InvalidInput(f"grade must be nonnegative: {tuple(beta)}")
        if height(beta) > self.cutoff:
            raise CutoffTooLarge(f"grade {tuple(beta)} is above the cutoff {self.cutoff}")

    def dim(self, beta: Grade) -> int:
        self._check_height(beta)
        return self.env.dim(beta)

    def basis(self, beta: Grade) -> List[Word]:
        self._check_height(beta)
        return self.env.basis(beta)

    # raising operators

    def _pairing_after(self, k: int, suffix: Sequence[int]) -> Fraction:
        """(λ − content(suffix))(α_k^∨)."""
        value = self.lam.pairings[k]
        for j in suffix:
            value -= self.A[k, j]
        return value

    def raise_word(self, k: int, w: Word) -> Vector:
        out: Vector = {}
        nf = self.env.monoid.normal_form
        for p, letter in enumerate(w):
            if letter != k:
                continue
            c = self._pairing_after(k, w[p + 1:])
            if c:
                axpy(out, c, {nf(w[:p] + w[p + 1:]): Fraction(1)})
        return out

    def raise_vector(self, k: int, vec: Vector) -> Vector:
        """e_k · vec, reduced in the grade one step up."""
        if not vec:
            return {}
        out: Vector = {}
        beta = None
        for w, c in vec.items():
            if beta is None:
                beta = self.env.grade_of({w: c})
            axpy(out, c, self.raise_word(k, w))
        if not out:
            return {}
        lower = tuple(b - (1 if j == k else 0) for j, b in enumerate(beta))
        return self.env.reduce(lower, out)

    # maximal vectors

    def maximal_vectors(self, beta: Grade) -> MaximalVectors:
        beta = tuple(beta)
        if beta in self._maximal:
            return self._maximal[beta]
        self._check_height(beta)
        basis = self.env.basis(beta)
        if height(beta) == 0:
            result = MaximalVectors(beta, 1, [{(): Fraction(1)}])
        else:
            images = []
            for w in basis:
                img: Vector = {}
                for k, b in enumerate(beta):
                    if b:
                        for key, c in self.raise_vector(k, {w: Fraction(1)}).items():
                            img[(k, key)] = c
                images.append(img)
            kernel = nullspace(images)
            vectors = [{basis[j]: c for j, c in combo.items()} for combo in kernel]
            result = MaximalVectors(beta, len(vectors), vectors)
        logger.debug(f"maximal vectors of M(λ) at {beta}: {result.dimension}")
        self._maximal[beta] = result
        return result

    def hom_dimension(self, beta: Grade) -> int:
        """dim Hom(M(λ−β), M(λ))."""
        return self.maximal_vectors(beta).dimension

    def maximal_grades(self, min_height: int = 1) -> List[Grade]:
        return [
            beta for beta in grades_up_to(self.n, self.cutoff, min_height)
            if self.maximal_vectors(beta).dimension
        ]

    # Shapovalov form

    def gram(self, beta: Grade) -> List[List[Fraction]]:
        """
        Contravariant form on basis(β), normalized by (m_λ, m_λ) = 1.

        For a basis word u = f_{u_0}·u', (u·m, v·m) = (u'·m, e_{u_0}v·m).
        """
        beta = tuple(beta)
        if beta in self._gram:
            return self._gram[beta]
        self._check_height(beta)
        basis = self.env.basis(beta)
        if height(beta) == 0:
            self._gram[beta] = [[Fraction(1)]]
            return self._gram[beta]
        matrix = []
        for u in basis:
            k = u[0]
            lower = tuple(b - (1 if j == k else 0) for j, b in enumerate(beta))
            sub = self.gram(lower)
            left = self.env.coordinates(lower, self.env.word_element(u[1:]))
            row = []
            for v in basis:
                right = self.env.coordinates(lower, self.raise_vector(k, {v: Fraction(1)}))
                row.append(_bilinear(left, sub, right))
            matrix.append(row)
        self._gram[beta] = matrix
        return matrix

    def pbw_basis(self, beta: Grade) -> List[Tuple[Tuple[Tuple[Grade, int], ...], Vector]]:
        """
        Non-decreasing products x_1···x_k of n⁻ basis elements with total grade β,
        ordered by (height, grade, Lyndon index). Their number is P(β).
        """
        beta = tuple(beta)
        if beta in self._pbw:
            return self._pbw[beta]
        self._check_height(beta)
        keys = []
        for g in grades_up_to(self.n, height(beta), 1):
            if dominated(g, beta):
                keys.extend((g, a) for a in range(self.nil.multiplicity(g)))
        keys.sort(key=lambda t: (height(t[0]), t[0], t[1]))

        out = []

        def rec(start: int, rest: Grade, chosen: Tuple[Tuple[Grade, int], ...], vec: Vector):
            if height(rest) == 0:
                out.append((chosen, vec))
                return
            for pos in range(start, len(keys)):
                g, a = keys[pos]
                if dominated(g, rest):
                    elem = self.nil.basis(g)[a][1]
                    rec(pos, sub_grades(rest, g), chosen + ((g, a),), self.env.multiply(vec, elem))

        rec(0, beta, (), {(): Fraction(1)})
        self._pbw[beta] = out
        return out

    def to_pbw(self, beta: Grade, vec: Vector) -> Dict[int, Fraction]:
        """Coordinates of a grade-β vector in pbw_basis(β)."""
        beta = tuple(beta)
        if beta not in self._pbw_solver:
            red = Reducer(track=True)
            for _, v in self.pbw_basis(beta):
                red.add(v)
            self._pbw_solver[beta] = red
        combo = self._pbw_solver[beta].solve(vec)
        if combo is None:
            raise InvalidInput(f"vector is not of grade {beta}")
        return {k: c for k, c in combo.items() if c}

    def shapovalov_matrix(self, beta: Grade, basis: str = "pbw") -> List[List[Fraction]]:
        gram = self.gram(beta)
        if basis == "words":
            return gram
        if basis != "pbw":
            raise InvalidInput(f"basis must be 'pbw' or 'words', got {basis!r}")
        beta = tuple(beta)
        C = [self.env.coordinates(beta, v) for _, v in self.pbw_basis(beta)]
        return [[_bilinear(ci, gram, cj) for cj in C] for ci in C]

    def shapovalov_det(self, beta: Grade) -> Fraction:
        return determinant(self.shapovalov_matrix(beta))

    def vanishing_factors(self, beta: Grade) -> List[Tuple[Grade, int]]:
        """Pairs (β′, r) with β′ ∈ Δ⁺, rβ′ ⪯ β and 2(λ+ρ, β′) = r(β′, β′)."""
        A = self.A
        shifted = Weight(tuple(x + A.diag(i) / 2 for i, x in enumerate(self.lam.pairings)))
        out = []
        for g in grades_up_to(self.n, height(beta), 1):
            if not dominated(g, beta) or not self.nil.is_root(g):
                continue
            lhs = 2 * A.weight_root_form(shifted, g)
            norm = A.bilinear_form(g, g)
            r = 1
            while dominated(tuple(r * x for x in g), beta):
                if lhs == r * norm:
                    out.append((g, r))
                r += 1
        return out

    def shapovalov_det_check(self, beta: Grade) -> ShapovalovCheck:
        """
        Compares the singularity of the contravariant form at grade β with the
        vanishing of some factor of the Kac-Kazhdan product.
        """
        beta = tuple(beta)
        if not self.A.is_symmetrizable:
            raise NotSymmetrizable("the contravariant form check needs a symmetrizable matrix")
        factors = self.vanishing_factors(beta)
        gram = self.gram(beta)
        rank = matrix_rank(gram) if gram else 0
        return ShapovalovCheck(
            grade=beta,
            dimension=len(gram),
            rank=rank,
            predicted_singular=bool(factors),
            factors=factors,
        )


def _bilinear(left: Sequence[Fraction], matrix: Sequence[Sequence[Fraction]], right: Sequence[Fraction]) -> Fraction:
    total = Fraction(0)
    for i, a in enumerate(left):
        if not a:
            continue
        row = matrix[i]
        for j, b in enumerate(right):
            if b:
                total += a * row[j] * b
    return total


def build_verma(A: BkmCartanMatrix, lam: Weight, cutoff: int, nil: Optional[GradedNilpotent] = None, **kwargs) -> VermaModel:
    nil = nil or build_nilpotent(A, cutoff, **kwargs)
    return VermaModel(nil, lam)


def rank1_maximal_grades(a11, lam, cutoff: int) -> List[int]:
    """Grades n ≥ 1 with n(λ − (a11/2)(n−1)) = 0."""
    a11, lam = Fraction(a11), Fraction(lam)
    return [n for n in range(1, cutoff + 1) if lam - a11 / 2 * (n - 1) == 0]
