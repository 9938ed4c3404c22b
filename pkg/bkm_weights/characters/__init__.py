from .formulas import (
    char_thmD,
    char_verma,
    char_wkb,
    denominator,
    denominator_for,
    independent_subset_sum,
    wkb_numerator,
)
from .rank2 import (
    char_numerators_6r,
    char_simple_rank2,
    composition_hypothesis,
    composition_r,
    kk_vs_numerator_report,
    oracle_character,
    simple_numerator_6r,
    theorem_c_numerator,
)
from .series import FormalCharacter
