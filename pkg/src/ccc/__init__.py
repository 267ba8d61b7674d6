"""Constrained correlation clustering via covering-LP rounding and pivoting."""

from .auxgraph import (
    AuxGraph,
    EdgeClass,
    build_aux_constrained,
    build_aux_friendly,
    build_aux_hostile,
    check_rounding_invariants,
    verify_pivot_safe,
)
from .dangerous import DangerousPairing, compute_dangerous_pairs, is_dangerous_pair
from .gen import (
    GenSpec,
    generate,
    generate_inconsistent,
    generate_infeasible,
    generate_with_truth,
)
from .heap import HeapConstraintSet, find_heaps
from .instance import (
    Clustering,
    InfeasibleInstance,
    InstanceFormatError,
    SignedInstance,
    SupernodeStructure,
    clustering_cost,
    compute_supernodes,
    format_instance,
    is_feasible,
    make_instance,
    normalize_assignment,
    parse_instance,
    to_consistent_form,
)
from .lp import (
    CoveringProgram,
    LpBuildError,
    LpSolution,
    SolverError,
    build_constrained_lp,
    build_friendly_lp,
    build_hostile_lp,
    check_feasibility,
    derive_x,
    solve_covering,
)
from .oracle import (
    ExactResult,
    TooLarge,
    exact_opt,
    iter_feasible_clusterings,
    num_feasible_clusterings,
    slow_ratio_check,
)
from .pivot import (
    EdgeBudgets,
    PivotTrace,
    TriangleIndex,
    make_budgets,
    pivot_deterministic,
    pivot_random,
    pivot_random_batch,
    pivot_sequence,
)
from .solve import (
    CertificateError,
    SolveReport,
    run_random_trials,
    solve_auto,
    solve_constrained,
    solve_friendly,
    solve_hostile,
)

__version__ = "0.1.0"

__all__ = [
    "AuxGraph",
    "CertificateError",
    "Clustering",
    "CoveringProgram",
    "DangerousPairing",
    "EdgeBudgets",
    "EdgeClass",
    "ExactResult",
    "GenSpec",
    "HeapConstraintSet",
    "InfeasibleInstance",
    "InstanceFormatError",
    "LpBuildError",
    "LpSolution",
    "PivotTrace",
    "SignedInstance",
    "SolveReport",
    "SolverError",
    "SupernodeStructure",
    "TooLarge",
    "TriangleIndex",
    "build_aux_constrained",
    "build_aux_friendly",
    "build_aux_hostile",
    "build_constrained_lp",
    "build_friendly_lp",
    "build_hostile_lp",
    "check_feasibility",
    "check_rounding_invariants",
    "clustering_cost",
    "compute_dangerous_pairs",
    "compute_supernodes",
    "derive_x",
    "exact_opt",
    "find_heaps",
    "format_instance",
    "generate",
    "generate_inconsistent",
    "generate_infeasible",
    "generate_with_truth",
    "is_dangerous_pair",
    "is_feasible",
    "iter_feasible_clusterings",
    "make_budgets",
    "make_instance",
    "normalize_assignment",
    "num_feasible_clusterings",
    "parse_instance",
    "pivot_deterministic",
    "pivot_random",
    "pivot_random_batch",
    "pivot_sequence",
    "run_random_trials",
    "slow_ratio_check",
    "solve_auto",
    "solve_constrained",
    "solve_covering",
    "solve_friendly",
    "solve_hostile",
    "to_consistent_form",
    "verify_pivot_safe",
    "__version__",
]
