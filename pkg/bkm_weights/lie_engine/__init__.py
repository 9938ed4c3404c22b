from .enveloping import GradedEnveloping
from .nilpotent import GradedNilpotent, build_nilpotent, necklace_count, witt_multiplicity
from .quotient import (
    SIMPLE,
    QuotientModel,
    maximal_integrable_quotient,
    quotient_multiplicities,
    simple_multiplicities,
)
from .verma import VermaModel, build_verma, rank1_maximal_grades
