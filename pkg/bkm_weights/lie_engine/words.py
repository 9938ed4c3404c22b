"""
Words over the node alphabet: Lyndon words and their standard bracketing,
and the trace monoid in which f_i, f_j commute whenever A_ij = 0.
"""
from functools import lru_cache
from typing import Dict, Iterator, List, Sequence, Tuple

from ..cartan import BkmCartanMatrix

Word = Tuple[int, ...]


def words_of_content(content: Sequence[int]) -> Iterator[Word]:
    """All words whose letter counts equal `content`, in lexicographic order."""
    content = list(content)
    total = sum(content)
    word: List[int] = []

    def rec():
        if len(word) == total:
            yield tuple(word)
            return
        for i, c in enumerate(content):
            if c:
                content[i] -= 1
                word.append(i)
                yield from rec()
                word.pop()
                content[i] += 1

    yield from rec()


def is_lyndon(w: Word) -> bool:
    """Strictly smaller than each of its proper rotations."""
    n = len(w)
    if n == 0:
        return False
    return all(w < w[k:] + w[:k] for k in range(1, n))


def lyndon_words_of_content(content: Sequence[int]) -> List[Word]:
    return [w for w in words_of_content(content) if is_lyndon(w)]


@lru_cache(maxsize=None)
def standard_factorization(w: Word) -> Tuple[Word, Word]:
    """w = uv with v the longest proper Lyndon suffix."""
    if len(w) < 2:
        raise ValueError(f"letters have no standard factorization: {w}")
    for k in range(1, len(w)):
        if is_lyndon(w[k:]):
            return w[:k], w[k:]
    raise ValueError(f"not a Lyndon word: {w}")


def bracketing(w: Word) -> str:
    """Standard bracketing of a Lyndon word, e.g. [f0,[f0,f1]]."""
    if len(w) == 1:
        return f"f{w[0]}"
    u, v = standard_factorization(w)
    return f"[{bracketing(u)},{bracketing(v)}]"


def content_of(w: Word, n: int) -> Tuple[int, ...]:
    c = [0] * n
    for i in w:
        c[i] += 1
    return tuple(c)


class TraceMonoid:
    """
    Words modulo f_i f_j = f_j f_i for i != j with A_ij = 0.

    The normal form is the lexicographically least representative, built by
    repeatedly extracting the smallest letter that commutes with every letter
    in front of its first occurrence.
    """

    def __init__(self, A: BkmCartanMatrix):
        n = A.n
        self.n = n
        self.commutes = frozenset(
            (i, j) for i in range(n) for j in range(n) if i != j and A[i, j] == 0
        )
        self._seen: Dict[Word, Word] = {}

    def normal_form(self, w: Word) -> Word:
        if not self.commutes or len(w) < 2:
            return w
        hit = self._seen.get(w)
        if hit is None:
            hit = self._seen[w] = self._normal_form(w)
        return hit

    def _normal_form(self, w: Word) -> Word:
        rest = list(w)
        out = []
        while rest:
            best_pos = None
            seen = []
            for pos, letter in enumerate(rest):
                if letter in seen:
                    continue
                if all((s, letter) in self.commutes for s in rest[:pos]):
                    if best_pos is None or letter < rest[best_pos]:
                        best_pos = pos
                seen.append(letter)
            out.append(rest.pop(best_pos))
        return tuple(out)

    def expand_polynomial(self, poly: Dict[Word, int]) -> Dict[Word, int]:
        out: Dict[Word, int] = {}
        for w, c in poly.items():
            key = self.normal_form(w)
            out[key] = out.get(key, 0) + c
        return {k: v for k, v in out.items() if v}


def ad_power(i: int, j: int, k: int) -> Dict[Word, int]:
    """(ad f_i)^k f_j as a polynomial in the free associative algebra."""
    poly: Dict[Word, int] = {(j,): 1}
    for _ in range(k):
        nxt: Dict[Word, int] = {}
        for w, c in poly.items():
            left, right = (i,) + w, w + (i,)
            nxt[left] = nxt.get(left, 0) + c
            nxt[right] = nxt.get(right, 0) - c
        poly = {w: c for w, c in nxt.items() if c}
    return poly
