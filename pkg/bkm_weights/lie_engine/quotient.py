"""
Quotients of a truncated Verma module.

The killed submodule S is computed grade by grade:

- hole kill-spec: S is generated by the maximal vectors Π_h f_h^{m_H(h)}·m_λ,
  so S_β = Σ_i f_i·S_{β−α_i} + span of the generators of grade β;
- explicit vectors: the same recursion with caller-supplied maximal vectors;
- "simple": S is the maximal proper submodule, S_0 = 0 and
  S_β = {v : e_i·v ∈ S_{β−α_i} for every i}, which yields L(λ).
"""
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Union

from loguru import logger

from ..cartan import Grade, grades_up_to, height
from ..decorators import log_elapsed
from ..errors import InvalidInput, NotMaximal
from .linalg import Reducer, Vector, matrix_rank, nullspace
from .verma import VermaModel

SIMPLE = "simple"


class QuotientModel:
    """
    Args:
        verma (VermaModel): the module being cut down.
        kill_spec: "simple", an iterable of (grade, vector) maximal vectors, or any
            object with a `generators()` method yielding (grade, vector) pairs
            (a HoleSet does).
    """

    def __init__(self, verma: VermaModel, kill_spec: Union[str, Iterable, object] = ()):
        self.verma = verma
        self.env = verma.env
        self.n = verma.n
        self.cutoff = verma.cutoff
        self.simple = kill_spec == SIMPLE
        self._gens: Dict[Grade, List[Vector]] = {}
        if not self.simple:
            pairs = kill_spec.generators() if hasattr(kill_spec, "generators") else kill_spec
            for grade, vec in pairs:
                self._add_generator(tuple(grade), vec)
        self._sub: Dict[Grade, Reducer] = {}

    def _add_generator(self, grade: Grade, vec: Vector):
        if len(grade) != self.n:
            raise InvalidInput(f"kill vector grade {grade} has the wrong length")
        if height(grade) == 0:
            raise NotMaximal("killing m_λ itself leaves the zero module")
        if height(grade) > self.cutoff:
            return
        vec = self.env.reduce(grade, self.env.normalize(vec))
        for k in range(self.n):
            if grade[k] and self.verma.raise_vector(k, vec):
                raise NotMaximal(f"kill vector at {grade} is not annihilated by e_{k}", grade=list(grade))
        self._gens.setdefault(grade, []).append(vec)

    def submodule(self, beta: Grade) -> Reducer:
        beta = tuple(beta)
        if beta in self._sub:
            return self._sub[beta]
        red = Reducer()
        if height(beta) > 0:
            if self.simple:
                for vec in self._radical(beta):
                    red.add(vec)
            else:
                for i, b in enumerate(beta):
                    if b:
                        lower = tuple(x - (1 if j == i else 0) for j, x in enumerate(beta))
                        for row in self.submodule(lower).basis():
                            red.add(self.env.left_multiply(i, row))
                for vec in self._gens.get(beta, []):
                    red.add(vec)
        self._sub[beta] = red
        return red

    def _radical(self, beta: Grade) -> List[Vector]:
        basis = self.env.basis(beta)
        images = []
        for w in basis:
            img: Vector = {}
            for k, b in enumerate(beta):
                if not b:
                    continue
                lower = tuple(x - (1 if j == k else 0) for j, x in enumerate(beta))
                residue = self.submodule(lower).reduce(self.verma.raise_vector(k, {w: Fraction(1)}))
                for key, c in residue.items():
                    img[(k, key)] = c
            images.append(img)
        return [{basis[j]: c for j, c in combo.items()} for combo in nullspace(images)]

    def dim(self, beta: Grade) -> int:
        self.verma._check_height(beta)
        return self.env.dim(beta) - self.submodule(beta).rank

    def multiplicities(self, cutoff: Optional[int] = None) -> Dict[Grade, int]:
        cutoff = self.cutoff if cutoff is None else min(cutoff, self.cutoff)
        return {beta: self.dim(beta) for beta in grades_up_to(self.n, cutoff)}

    def support(self, cutoff: Optional[int] = None) -> List[Grade]:
        return [beta for beta, d in self.multiplicities(cutoff).items() if d]


@log_elapsed("quotient_multiplicities")
def quotient_multiplicities(verma: VermaModel, kill_spec=(), cutoff: Optional[int] = None) -> Dict[Grade, int]:
    model = QuotientModel(verma, kill_spec)
    out = model.multiplicities(cutoff)
    logger.debug(f"quotient of M(λ={verma.lam.to_dict()['pairings']}): {sum(out.values())} vectors below the cutoff")
    return out


def simple_multiplicities(verma: VermaModel, cutoff: Optional[int] = None) -> Dict[Grade, int]:
    return quotient_multiplicities(verma, SIMPLE, cutoff)


def shapovalov_rank_check(verma: VermaModel, beta: Grade) -> bool:
    """dim L(λ)_{λ−β} equals the rank of the contravariant form at β."""
    gram = verma.gram(beta)
    return QuotientModel(verma, SIMPLE).dim(beta) == matrix_rank(gram)


def maximal_integrable_quotient(verma: VermaModel) -> QuotientModel:
    """M(λ) modulo f_i^{M_i}·m_λ for every i ∈ J_λ."""
    report = verma.A.cone_membership(verma.lam)
    gens = []
    for i in sorted(report.J_lambda):
        m = report.powers[i]
        grade = tuple(m if j == i else 0 for j in range(verma.n))
        gens.append((grade, {(i,) * m: Fraction(1)}))
    return QuotientModel(verma, gens)
