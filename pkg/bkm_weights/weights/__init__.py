from .formulas import (
    dominant_representative,
    free_directions,
    independent_weight_in_wtV,
    minkowski_check,
    simple_weight_formula,
    thmA_enumerate,
    thmA_membership,
    thmB_first_formula,
    thmB_weights,
)
from .holes import Hole, HoleSet
