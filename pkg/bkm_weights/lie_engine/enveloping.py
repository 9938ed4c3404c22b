"""
U(n⁻) graded by ℤ≥0Π, built lazily grade by grade.

A grade-β piece is the span of trace-monoid normal words of content β modulo
the grade-β piece of the two-sided ideal generated by the Serre relators
(ad f_i)^{1−A_ij} f_j, i real. Elements are sparse dicts {word: Fraction}
reduced to their canonical residue, so equal elements are equal dicts.
"""
from fractions import Fraction
from typing import Dict, List, Tuple

from loguru import logger

from ..cartan import BkmCartanMatrix, Grade, sub_grades
from .linalg import Reducer, Vector, axpy
from .words import TraceMonoid, Word, ad_power, content_of


class GradedEnveloping:
    def __init__(self, A: BkmCartanMatrix):
        self.A = A
        self.n = A.n
        self.monoid = TraceMonoid(A)
        self.relators = self._serre_relators()
        self._words: Dict[Grade, List[Word]] = {self.zero: [()]}
        self._ideal: Dict[Grade, Reducer] = {self.zero: Reducer()}
        self._basis: Dict[Grade, List[Word]] = {}

    @property
    def zero(self) -> Grade:
        return (0,) * self.n

    def simple(self, i: int) -> Grade:
        return tuple(1 if j == i else 0 for j in range(self.n))

    def _serre_relators(self) -> List[Tuple[Grade, Vector]]:
        out = []
        for i in sorted(self.A.real_nodes):
            for j in range(self.n):
                if j == i or self.A[i, j] == 0:
                    continue
                k = int(1 - self.A[i, j])
                poly = self.monoid.expand_polynomial(ad_power(i, j, k))
                if not poly:
                    continue
                grade = tuple(k if t == i else (1 if t == j else 0) for t in range(self.n))
                out.append((grade, {w: Fraction(c) for w, c in poly.items()}))
        return out

    # words and ideal

    def words(self, beta: Grade) -> List[Word]:
        beta = tuple(beta)
        if beta in self._words:
            return self._words[beta]
        if any(b < 0 for b in beta):
            return []
        found = set()
        for i, b in enumerate(beta):
            if b:
                for w in self.words(sub_grades(beta, self.simple(i))):
                    found.add(self.monoid.normal_form((i,) + w))
        self._words[beta] = sorted(found)
        return self._words[beta]

    def ideal(self, beta: Grade) -> Reducer:
        beta = tuple(beta)
        if beta in self._ideal:
            return self._ideal[beta]
        red = Reducer()
        for i, b in enumerate(beta):
            if not b:
                continue
            lower = self.ideal(sub_grades(beta, self.simple(i)))
            for row in lower.basis():
                red.add(self._left_word(i, row))
        for grade, rel in self.relators:
            rest = sub_grades(beta, grade)
            if any(c < 0 for c in rest):
                continue
            for w in self.words(rest):
                red.add(self._right_word(rel, w))
        logger.debug(f"Serre ideal at grade {beta}: dim {red.rank} of {len(self.words(beta))} words")
        self._ideal[beta] = red
        return red

    def _left_word(self, i: int, vec: Vector) -> Vector:
        nf = self.monoid.normal_form
        out: Vector = {}
        for w, c in vec.items():
            axpy(out, c, {nf((i,) + w): Fraction(1)})
        return out

    def _right_word(self, vec: Vector, w: Word) -> Vector:
        nf = self.monoid.normal_form
        out: Vector = {}
        for u, c in vec.items():
            axpy(out, c, {nf(u + w): Fraction(1)})
        return out

    # normal basis

    def basis(self, beta: Grade) -> List[Word]:
        """Words of grade β that are not pivots of the ideal; a basis of U_β."""
        beta = tuple(beta)
        if beta not in self._basis:
            pivots = self.ideal(beta).pivots
            self._basis[beta] = [w for w in self.words(beta) if w not in pivots]
        return self._basis[beta]

    def dim(self, beta: Grade) -> int:
        if any(b < 0 for b in beta):
            return 0
        return len(self.basis(beta))

    def reduce(self, beta: Grade, vec: Vector) -> Vector:
        return self.ideal(beta).reduce(vec)

    def grade_of(self, vec: Vector) -> Grade:
        w = next(iter(vec))
        return content_of(w, self.n)

    # products

    def left_multiply(self, i: int, vec: Vector) -> Vector:
        """f_i · vec, reduced."""
        if not vec:
            return {}
        out = self._left_word(i, vec)
        beta = content_of(next(iter(out)), self.n)
        return self.reduce(beta, out)

    def multiply(self, x: Vector, y: Vector) -> Vector:
        if not x or not y:
            return {}
        nf = self.monoid.normal_form
        out: Vector = {}
        for u, a in x.items():
            for v, b in y.items():
                axpy(out, a * b, {nf(u + v): Fraction(1)})
        if not out:
            return {}
        beta = content_of(next(iter(out)), self.n)
        return self.reduce(beta, out)

    def commutator(self, x: Vector, y: Vector) -> Vector:
        return axpy(self.multiply(x, y), -1, self.multiply(y, x))

    def normalize(self, vec: Vector) -> Vector:
        """Rewrites the keys of vec in trace normal form."""
        nf = self.monoid.normal_form
        out: Vector = {}
        for w, c in vec.items():
            axpy(out, Fraction(c), {nf(tuple(w)): Fraction(1)})
        return out

    def word_element(self, w: Word) -> Vector:
        w = self.monoid.normal_form(tuple(w))
        return self.reduce(content_of(w, self.n), {w: Fraction(1)})

    def coordinates(self, beta: Grade, vec: Vector) -> List[Fraction]:
        """Coordinates of a reduced vector in basis(β)."""
        return [vec.get(w, Fraction(0)) for w in self.basis(beta)]
