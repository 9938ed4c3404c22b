from .dn import (
    DnSolution,
    block_decompose,
    block_lemma_check,
    dn_count_table,
    dn_split,
    dn_value,
    enumerate_dn,
    is_hole_solution,
)
from .kk import KkResult, KkStep, chain_residuals, kk_linked, kk_linked_set
from .number_theory import (
    interior_solutions,
    unique_solution_bruteforce,
    unique_solution_predicate,
    uniqueness_table,
)
from .rank2 import (
    Classification,
    QuadraticInstance,
    SolutionSet,
    check_solution,
    classify_22,
    enumerate_solutions_rank2,
    kk_check,
    lemma_square,
    pell_instance,
    solve_with_sympy,
)
