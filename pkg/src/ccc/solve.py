"""End-to-end solvers: covering LP, auxiliary graph, pivot, certificate.

Three variants share one pipeline skeleton.  The general solver handles
mixed friendly and hostile constraints; the friendly-only and hostile-only
solvers drop the machinery their restricted setting does not need.  Every
deterministic run carries an exact certificate cost <= 3 * lp_objective,
checked in integer arithmetic before the report is returned.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .auxgraph import (
    AuxGraph,
    build_aux_constrained,
    build_aux_friendly,
    build_aux_hostile,
    verify_pivot_safe,
)
from .dangerous import compute_dangerous_pairs
from .heap import find_heaps
from .instance import (
    Clustering,
    SignedInstance,
    clustering_cost,
    compute_supernodes,
    is_feasible,
    to_consistent_form,
)
from .lp import (
    GRID_BITS,
    LpSolution,
    build_constrained_lp,
    build_friendly_lp,
    build_hostile_lp,
    solve_covering,
)
from .pivot import (
    make_budgets,
    pivot_deterministic,
    pivot_random,
    pivot_random_batch,
)

DEFAULT_EPSILON = 0.3


class CertificateError(RuntimeError):
    """An internal guarantee failed (infeasible output or broken certificate)."""


@dataclass(frozen=True)
class SolveReport:
    """Result of one solver run.

    cost is measured on the consistent form; cost_original adds the forced
    mistakes, giving the cost of the same clustering on the input instance.
    lp_objective and certified_ratio are None when no LP was solved
    (random-pivot hostile runs).
    """

    clustering: Clustering
    cost: int
    cost_original: int
    forced_mistakes: int
    lp_objective: float | None
    certified_ratio: float | None
    variant: str
    epsilon: float | None
    pivot_strategy: str
    seed: int | None
    timings: dict = field(repr=False)
    trace: object = field(repr=False, default=None)
    lp_objective_units: int | None = None
    """LP objective in 2^-35 grid units, for exact certificate arithmetic."""


def _certified_ratio(cost: int, sol: LpSolution | None):
    if sol is None:
        return None
    if sol.objective_value == 0.0:
        return 1.0 if cost == 0 else float("inf")
    return cost / sol.objective_value


def _check_certificate(cost: int, sol: LpSolution, fixed_objective: int) -> None:
    """Exact integer check of cost <= 3 * lp_objective on the dyadic grid."""
    lhs = cost << GRID_BITS
    rhs = 3 * ((fixed_objective << GRID_BITS) + sol.objective_units)
    if lhs > rhs:
        raise CertificateError(
            "certificate violated: cost %d > 3 * lp objective %.12g"
            % (cost, sol.objective_value)
        )


def _finish(
    inst0: SignedInstance,
    inst: SignedInstance,
    forced: int,
    clustering: Clustering,
    trace,
    sol: LpSolution | None,
    fixed_objective: int,
    variant: str,
    epsilon: float | None,
    pivot_strategy: str,
    seed: int | None,
    timings: dict,
) -> SolveReport:
    cost = clustering_cost(inst, clustering)
    if not is_feasible(inst0, clustering):
        raise CertificateError("pipeline produced an infeasible clustering")
    if pivot_strategy == "deterministic" and sol is not None:
        _check_certificate(cost, sol, fixed_objective)
    units = None
    if sol is not None:
        units = (fixed_objective << GRID_BITS) + sol.objective_units
    return SolveReport(
        clustering=clustering,
        cost=cost,
        cost_original=cost + forced,
        forced_mistakes=forced,
        lp_objective=None if sol is None else sol.objective_value,
        certified_ratio=_certified_ratio(cost, sol),
        variant=variant,
        epsilon=epsilon,
        pivot_strategy=pivot_strategy,
        seed=seed,
        timings=timings,
        trace=trace,
        lp_objective_units=units,
    )


def _assert_pivot_safe(inst, sn, g_hat: AuxGraph) -> None:
    violations = verify_pivot_safe(inst, sn, g_hat)
    if violations:
        raise CertificateError(
            "auxiliary graph unsafe for pivoting: %r" % (violations[:3],)
        )


def _run_pivot(g_hat, inst, budgets, pivot_strategy, seed):
    if pivot_strategy == "deterministic":
        return pivot_deterministic(g_hat, inst, budgets)
    if pivot_strategy == "random":
        return pivot_random(g_hat, seed if seed is not None else 0)
    raise ValueError("unknown pivot strategy %r" % pivot_strategy)


class _Clock:
    def __init__(self):
        self.timings = {}
        self._last = time.perf_counter()

    def lap(self, stage: str):
        now = time.perf_counter()
        self.timings[stage] = now - self._last
        self._last = now


def prepare_constrained(inst0: SignedInstance, epsilon: float):
    """Shared front half of the general pipeline, up to the pivot stage.

    Returns (inst, forced, g_hat, budgets, sol, fixed_objective, timings).
    """
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    clock = _Clock()
    inst, forced = to_consistent_form(inst0)
    clock.lap("consistent_form")
    sn = compute_supernodes(inst)
    clock.lap("supernodes")
    dp = compute_dangerous_pairs(inst, sn)
    clock.lap("dangerous_pairs")
    heaps = find_heaps(inst, sn, dp)
    clock.lap("heaps")
    prog = build_constrained_lp(inst, sn, dp, heaps)
    clock.lap("lp_build")
    sol = solve_covering(prog, epsilon / 3.0)
    clock.lap("lp_solve")
    g_hat = build_aux_constrained(inst, sn, dp, sol)
    _assert_pivot_safe(inst, sn, g_hat)
    clock.lap("aux_graph")
    budgets = make_budgets(g_hat, sol, "constrained")
    return inst, forced, g_hat, budgets, sol, prog.fixed_objective, clock.timings


def solve_constrained(
    inst0: SignedInstance,
    epsilon: float = DEFAULT_EPSILON,
    pivot_strategy: str = "deterministic",
    seed: int | None = None,
) -> SolveReport:
    """General solver: covering LP at epsilon/3, auxiliary graph, pivot."""
    inst, forced, g_hat, budgets, sol, fixed_obj, timings = prepare_constrained(
        inst0, epsilon
    )
    t0 = time.perf_counter()
    clustering, trace = _run_pivot(g_hat, inst, budgets, pivot_strategy, seed)
    timings["pivot"] = time.perf_counter() - t0
    return _finish(
        inst0, inst, forced, clustering, trace, sol, fixed_obj,
        "constrained", epsilon, pivot_strategy, seed, timings,
    )


def prepare_friendly(inst0: SignedInstance, epsilon: float):
    if inst0.hostile:
        raise ValueError("friendly solver requires an empty hostile set")
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie in (0, 1)")
    clock = _Clock()
    inst, forced = to_consistent_form(inst0)
    clock.lap("consistent_form")
    sn = compute_supernodes(inst)
    clock.lap("supernodes")
    prog = build_friendly_lp(inst, sn)
    clock.lap("lp_build")
    sol = solve_covering(prog, epsilon / 3.0)
    clock.lap("lp_solve")
    g_hat = build_aux_friendly(inst, sn, sol)
    _assert_pivot_safe(inst, sn, g_hat)
    clock.lap("aux_graph")
    budgets = make_budgets(g_hat, sol, "friendly")
    return inst, forced, g_hat, budgets, sol, prog.fixed_objective, clock.timings


def solve_friendly(
    inst0: SignedInstance,
    epsilon: float = DEFAULT_EPSILON,
    pivot_strategy: str = "deterministic",
    seed: int | None = None,
) -> SolveReport:
    """Friendly-only solver: lighter LP, sign rule X- >= X+, budgets y = x."""
    inst, forced, g_hat, budgets, sol, fixed_obj, timings = prepare_friendly(
        inst0, epsilon
    )
    t0 = time.perf_counter()
    clustering, trace = _run_pivot(g_hat, inst, budgets, pivot_strategy, seed)
    timings["pivot"] = time.perf_counter() - t0
    return _finish(
        inst0, inst, forced, clustering, trace, sol, fixed_obj,
        "friendly", epsilon, pivot_strategy, seed, timings,
    )


def prepare_hostile(inst0: SignedInstance, epsilon: float | None, need_lp: bool):
    if inst0.friendly:
        raise ValueError("hostile solver requires an empty friendly set")
    clock = _Clock()
    inst, forced = to_consistent_form(inst0)
    clock.lap("consistent_form")
    sn = compute_supernodes(inst)
    clock.lap("supernodes")
    dp = compute_dangerous_pairs(inst, sn)
    clock.lap("dangerous_pairs")
    sol = None
    fixed_obj = 0
    if need_lp:
        eps = DEFAULT_EPSILON if epsilon is None else epsilon
        if not (0.0 < eps < 1.0):
            raise ValueError("epsilon must lie in (0, 1)")
        prog = build_hostile_lp(inst)
        clock.lap("lp_build")
        sol = solve_covering(prog, eps / 3.0)
        fixed_obj = prog.fixed_objective
        clock.lap("lp_solve")
    g_hat = build_aux_hostile(inst, dp)
    _assert_pivot_safe(inst, sn, g_hat)
    clock.lap("aux_graph")
    budgets = None
    if sol is not None:
        budgets = make_budgets(g_hat, sol, "hostile")
    return inst, forced, g_hat, budgets, sol, fixed_obj, clock.timings


def solve_hostile(
    inst0: SignedInstance,
    pivot_strategy: str = "random",
    seed: int | None = None,
    epsilon: float | None = None,
) -> SolveReport:
    """Hostile-only solver: flip extracted pairs, pivot, no LP unless certified.

    Random pivoting needs no LP at all.  Deterministic pivoting solves the
    per-pair LP to obtain budgets (2 on flipped pairs, 3x elsewhere) and a
    certificate.
    """
    need_lp = pivot_strategy == "deterministic"
    inst, forced, g_hat, budgets, sol, fixed_obj, timings = prepare_hostile(
        inst0, epsilon, need_lp
    )
    t0 = time.perf_counter()
    clustering, trace = _run_pivot(g_hat, inst, budgets, pivot_strategy, seed)
    timings["pivot"] = time.perf_counter() - t0
    eps_used = None
    if need_lp:
        eps_used = DEFAULT_EPSILON if epsilon is None else epsilon
    return _finish(
        inst0, inst, forced, clustering, trace, sol, fixed_obj,
        "hostile", eps_used, pivot_strategy, seed, timings,
    )


def pick_variant(inst: SignedInstance) -> str:
    """friendly when H is empty, hostile when only H is present, else general."""
    if not inst.hostile:
        return "friendly"
    if not inst.friendly:
        return "hostile"
    return "constrained"


def solve_auto(
    inst: SignedInstance,
    epsilon: float = DEFAULT_EPSILON,
    pivot_strategy: str = "deterministic",
    seed: int | None = None,
) -> SolveReport:
    variant = pick_variant(inst)
    if variant == "friendly":
        return solve_friendly(inst, epsilon, pivot_strategy, seed)
    if variant == "hostile":
        return solve_hostile(inst, pivot_strategy, seed, epsilon)
    return solve_constrained(inst, epsilon, pivot_strategy, seed)


def run_random_trials(
    inst0: SignedInstance,
    variant: str,
    epsilon: float | None,
    seed: int,
    trials: int,
):
    """Random-pivot sweep over seeds seed..seed+trials-1 on one shared graph.

    Returns (costs, assignments, forced) with consistent-form costs; every
    assignment is feasibility-checked against the original constraints.
    """
    if trials < 1:
        raise ValueError("trials must be positive")
    if variant == "auto":
        variant = pick_variant(inst0)
    if variant == "constrained":
        inst, forced, g_hat, _, _, _, _ = prepare_constrained(
            inst0, DEFAULT_EPSILON if epsilon is None else epsilon
        )
    elif variant == "friendly":
        inst, forced, g_hat, _, _, _, _ = prepare_friendly(
            inst0, DEFAULT_EPSILON if epsilon is None else epsilon
        )
    elif variant == "hostile":
        inst, forced, g_hat, _, _, _, _ = prepare_hostile(inst0, epsilon, False)
    else:
        raise ValueError("unknown variant %r" % variant)
    seeds = (int(seed) + np.arange(trials, dtype=np.uint64)) & np.uint64(2**64 - 1)
    assigns, costs = pivot_random_batch(g_hat, inst, seeds)
    for row in assigns:
        if not is_feasible(inst0, Clustering(assignment=row)):
            raise CertificateError("random pivot produced an infeasible clustering")
    return costs, assigns, forced
