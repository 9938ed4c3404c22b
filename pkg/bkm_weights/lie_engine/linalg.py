"""
Exact sparse linear algebra over ℚ.

Vectors are dicts {key: Fraction} holding only nonzero entries; keys must be
mutually comparable. Elimination pivots on the smallest key of each row, so
reduced forms are canonical for a fixed row space.
"""
import heapq
from fractions import Fraction
from typing import Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Vector = Dict[Hashable, Fraction]

ZERO = Fraction(0)


def axpy(y: Vector, a, x: Vector) -> Vector:
    """y += a*x in place."""
    if not a:
        return y
    for k, v in x.items():
        s = y.get(k, ZERO) + a * v
        if s:
            y[k] = s
        else:
            y.pop(k, None)
    return y


def scaled(x: Vector, a) -> Vector:
    if not a:
        return {}
    return {k: a * v for k, v in x.items()}


def combine(terms: Iterable[Tuple[Fraction, Vector]]) -> Vector:
    out: Vector = {}
    for a, x in terms:
        axpy(out, a, x)
    return out


class Reducer:
    """
    Incremental echelon basis of a subspace.

    Args:
        track (bool): remember, for every stored row, which combination of the
            added vectors produced it. Needed by `solve` and `nullspace`.
    """

    def __init__(self, track: bool = False):
        self.rows: Dict[Hashable, Vector] = {}
        self.track = track
        self.combos: Dict[Hashable, Vector] = {}
        self._added = 0

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    @property
    def pivots(self):
        return self.rows.keys()

    def _reduce(self, vec: Vector, combo: Optional[Vector]) -> Tuple[Vector, Optional[Vector]]:
        vec = dict(vec)
        heap = [k for k in vec if k in self.rows]
        heapq.heapify(heap)
        done = set()
        while heap:
            p = heapq.heappop(heap)
            if p in done:
                continue
            done.add(p)
            c = vec.get(p)
            if not c:
                continue
            row = self.rows[p]
            for k, v in row.items():
                s = vec.get(k, ZERO) - c * v
                if s:
                    if k not in vec and k in self.rows and k not in done:
                        heapq.heappush(heap, k)
                    vec[k] = s
                else:
                    vec.pop(k, None)
            if combo is not None:
                axpy(combo, -c, self.combos[p])
        return vec, combo

    def reduce(self, vec: Vector) -> Vector:
        """Canonical representative of vec modulo the stored span."""
        return self._reduce(vec, None)[0]

    def contains(self, vec: Vector) -> bool:
        return not self.reduce(vec)

    def add(self, vec: Vector) -> bool:
        """Adds vec to the span; returns False when it was already in it."""
        combo = {self._added: Fraction(1)} if self.track else None
        self._added += 1
        vec, combo = self._reduce(vec, combo)
        if not vec:
            return False
        p = min(vec)
        inv = 1 / vec[p]
        self.rows[p] = {k: v * inv for k, v in vec.items()}
        if self.track:
            self.combos[p] = scaled(combo, inv)
        return True

    def solve(self, vec: Vector) -> Optional[Vector]:
        """
        Coefficients c with Σ c_k v_k = vec over the added vectors v_k,
        or None when vec is outside the span.
        """
        if not self.track:
            raise RuntimeError("solve() needs a tracking reducer")
        residual, combo = self._reduce(vec, {})
        if residual:
            return None
        return scaled(combo, -1)

    def basis(self) -> List[Vector]:
        return [self.rows[p] for p in sorted(self.rows)]


def nullspace(images: Sequence[Vector]) -> List[Vector]:
    """
    Kernel of the linear map sending basis vector j to images[j].

    Returns kernel vectors as {j: coefficient}; each has a distinct largest
    index, so they are linearly independent.
    """
    red = Reducer(track=True)
    kernel = []
    for j, img in enumerate(images):
        combo = {j: Fraction(1)}
        vec, combo = red._reduce(img, combo)
        red._added += 1
        if not vec:
            kernel.append(combo)
            continue
        p = min(vec)
        inv = 1 / vec[p]
        red.rows[p] = {k: v * inv for k, v in vec.items()}
        red.combos[p] = scaled(combo, inv)
    return kernel


def rank(vectors: Iterable[Vector]) -> int:
    red = Reducer()
    for v in vectors:
        red.add(v)
    return red.rank


def matrix_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    return rank({j: Fraction(x) for j, x in enumerate(row) if x} for row in rows)


def determinant(matrix: Sequence[Sequence[Fraction]]) -> Fraction:
    """Fraction-exact Gaussian elimination with first-nonzero pivoting."""
    m = [[Fraction(x) for x in row] for row in matrix]
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            f = m[r][col] * inv
            if f:
                for c in range(col, n):
                    m[r][c] -= f * m[col][c]
    return det
