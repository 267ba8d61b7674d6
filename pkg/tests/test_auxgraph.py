"""Auxiliary-graph rounding rules, edge classes, and safety checks."""

import numpy as np
import pytest

from ccc.auxgraph import (
    AuxGraph,
    EdgeClass,
    build_aux_constrained,
    build_aux_friendly,
    build_aux_hostile,
    check_rounding_invariants,
    verify_pivot_safe,
)
from ccc.dangerous import compute_dangerous_pairs
from ccc.gen import GenSpec, generate
from ccc.heap import find_heaps
from ccc.instance import compute_supernodes, make_instance, to_consistent_form
from ccc.lp import (
    GRID_SCALE,
    LpSolution,
    build_constrained_lp,
    build_friendly_lp,
    derive_x,
)
from ccc.solve import prepare_constrained

HAND_SAMPLE8 = {
    "X+(0,2)": 0.0, "X-(0,2)": 1.0,
    "X+(2,3)": 0.0, "X-(2,3)": 1.0,
    "X+(1,2)": 1.0, "X-(1,2)": 0.5,
    "X+(0,3)": 0.5, "X-(0,3)": 1.0,
    "X+(1,3)": 0.5, "X-(1,3)": 0.5,
}


def hand_solution(prog, mapping):
    values = np.array([mapping[nm] for nm in prog.var_names])
    units = np.rint(values * GRID_SCALE).astype(np.int64)
    return LpSolution(
        values=values,
        objective_value=prog.fixed_objective + float(prog.objective @ values),
        x=derive_x(prog, values),
        objective_units=int(prog.objective @ units),
        increments=0,
    )


def constrained_parts(inst):
    cons, _ = to_consistent_form(inst)
    sn = compute_supernodes(cons)
    dp = compute_dangerous_pairs(cons, sn)
    heaps = find_heaps(cons, sn, dp)
    prog = build_constrained_lp(cons, sn, dp, heaps)
    return cons, sn, dp, prog


def classes_of(g, cls):
    return {
        (int(u), int(v))
        for u, v in zip(*np.nonzero(np.triu(g.edge_class == cls)))
    }


# ---------------------------------------------------------------------------
# constrained rounding rule
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "xplus,xminus,positive",
    [
        (0.625, 1.0, True),    # below both thresholds
        (0.6875, 1.0, False),  # above 2/3
        (0.5, 0.5, False),     # not strictly below X-
        (0.0, 1.0, True),
        (1.0, 0.5, False),
    ],
)
def test_constrained_threshold_rule(xplus, xminus, positive):
    # Two 2-node supernodes joined by one positive pair (0,2); the negative
    # pairs (0,3),(1,2),(1,3) give the superedge an X- representative.
    inst = make_instance(4, positives=[(0, 2)], friendly=[(0, 1), (2, 3)])
    cons, sn, dp, prog = constrained_parts(inst)
    sol = hand_solution(prog, {"X+(0,1)": xplus, "X-(0,1)": xminus})
    g = build_aux_constrained(cons, sn, dp, sol)
    assert (g.sign_hat[0, 2] > 0) == positive


def test_constrained_needs_surviving_positive_edge():
    # Every positive edge of the (0,1) and (1,2) superedges is extracted,
    # so they stay negative no matter what the LP says.
    inst = make_instance(3, positives=[(0, 1), (1, 2)], hostile=[(0, 2)])
    cons, sn, dp, prog = constrained_parts(inst)
    assert dp.e_d == frozenset({(0, 1), (1, 2)})
    sol = hand_solution(
        prog,
        {nm: 0.0 if nm.startswith("X+") else 1.0 for nm in prog.var_names},
    )
    g = build_aux_constrained(cons, sn, dp, sol)
    assert g.sign_hat[0, 1] < 0 and g.sign_hat[1, 2] < 0


def test_intra_supernode_always_positive(sample8):
    cons, sn, dp, prog = constrained_parts(sample8)
    sol = hand_solution(prog, HAND_SAMPLE8)
    g = build_aux_constrained(cons, sn, dp, sol)
    for members in sn.members:
        for i, u in enumerate(members):
            for v in members[i + 1 :]:
                assert g.sign_hat[u, v] > 0


def test_sample8_hand_rounding_golden(sample8):
    cons, sn, dp, prog = constrained_parts(sample8)
    sol = hand_solution(prog, HAND_SAMPLE8)
    g = build_aux_constrained(cons, sn, dp, sol)
    # positive superedges: (0,2) and (2,3) only
    assert g.sign_hat[0, 4] > 0 and g.sign_hat[1, 6] > 0
    assert g.sign_hat[4, 7] > 0 and g.sign_hat[6, 7] > 0
    assert g.sign_hat[2, 5] < 0 and g.sign_hat[1, 7] < 0 and g.sign_hat[2, 7] < 0
    assert classes_of(g, EdgeClass.B) == {(1, 7), (2, 7)}
    assert classes_of(g, EdgeClass.O) == {(2, 5), (3, 4)}
    assert classes_of(g, EdgeClass.PP) == {
        (0, 1), (0, 4), (0, 5), (1, 6), (2, 3), (4, 5), (4, 6), (4, 7), (5, 6),
    }
    assert classes_of(g, EdgeClass.MP) == {(0, 6), (1, 4), (1, 5), (5, 7), (6, 7)}
    assert verify_pivot_safe(cons, sn, g) == []
    assert check_rounding_invariants(cons, sn, dp, g, sol) == []


def test_b_class_needs_both_halves_flipped(sample8):
    cons, sn, dp, prog = constrained_parts(sample8)
    sol = hand_solution(prog, HAND_SAMPLE8)
    g = build_aux_constrained(cons, sn, dp, sol)
    # (0,4) and (0,5) stay positive, so their partners (2,5),(3,4) are O not B.
    assert g.edge_class[0, 4] == EdgeClass.PP
    assert g.edge_class[2, 5] == EdgeClass.O


# ---------------------------------------------------------------------------
# friendly rounding rule
# ---------------------------------------------------------------------------


@pytest.mark.parametrize(
    "xplus,xminus,positive",
    [
        (0.5, 0.5, True),      # tie goes positive
        (0.5, 0.4375, False),
        (0.25, 0.75, True),
        (1.0, 0.0, False),
    ],
)
def test_friendly_majority_rule(xplus, xminus, positive):
    inst = make_instance(4, positives=[(0, 2)], friendly=[(0, 1), (2, 3)])
    cons, _ = to_consistent_form(inst)
    sn = compute_supernodes(cons)
    prog = build_friendly_lp(cons, sn)
    sol = hand_solution(prog, {"X+(0,1)": xplus, "X-(0,1)": xminus})
    g = build_aux_friendly(cons, sn, sol)
    assert (g.sign_hat[0, 2] > 0) == positive


def test_friendly_rejects_hostile(sample8):
    cons, _ = to_consistent_form(sample8)
    sn = compute_supernodes(cons)
    with pytest.raises(ValueError):
        build_aux_friendly(cons, sn, None)


# ---------------------------------------------------------------------------
# hostile rounding rule
# ---------------------------------------------------------------------------


def test_hostile_flips_extracted_edges():
    inst = make_instance(3, positives=[(0, 1), (1, 2)], hostile=[(0, 2)])
    cons, _ = to_consistent_form(inst)
    sn = compute_supernodes(cons)
    dp = compute_dangerous_pairs(cons, sn)
    g = build_aux_hostile(cons, dp)
    assert g.sign_hat[0, 1] < 0 and g.sign_hat[1, 2] < 0 and g.sign_hat[0, 2] < 0
    assert classes_of(g, EdgeClass.B) == {(0, 1), (1, 2)}
    assert g.edge_class[0, 2] == EdgeClass.MM
    assert classes_of(g, EdgeClass.MP) == set()
    assert classes_of(g, EdgeClass.O) == set()


def test_hostile_keeps_other_edges():
    inst = make_instance(4, positives=[(0, 1), (2, 3)], hostile=[(1, 2)])
    cons, _ = to_consistent_form(inst)
    sn = compute_supernodes(cons)
    dp = compute_dangerous_pairs(cons, sn)
    g = build_aux_hostile(cons, dp)
    assert np.array_equal(g.sign_hat, cons.sign)


def test_hostile_rejects_friendly():
    inst = make_instance(3, friendly=[(0, 1)])
    cons, _ = to_consistent_form(inst)
    with pytest.raises(ValueError):
        build_aux_hostile(cons, None)


# ---------------------------------------------------------------------------
# safety checks
# ---------------------------------------------------------------------------


def corrupt(g, u, v, value):
    sh = np.array(g.sign_hat)
    sh[u, v] = sh[v, u] = value
    return AuxGraph(n=g.n, sign_hat=sh, edge_class=np.array(g.edge_class))


def test_verify_pivot_safe_detects_corruption(sample8):
    cons, sn, dp, prog = constrained_parts(sample8)
    g = build_aux_constrained(cons, sn, dp, hand_solution(prog, HAND_SAMPLE8))
    assert verify_pivot_safe(cons, sn, g) == []

    broken = corrupt(g, 0, 1, -1)  # intra-supernode pair negative
    kinds = {v[0] for v in verify_pivot_safe(cons, sn, broken)}
    assert "supernode-pair-negative" in kinds

    broken = corrupt(g, 1, 4, -1)  # 0 and 1 now disagree about node 4
    kinds = {v[0] for v in verify_pivot_safe(cons, sn, broken)}
    assert "neighborhood-mismatch" in kinds

    broken = corrupt(g, 1, 2, 1)  # hostile pair positive
    kinds = {v[0] for v in verify_pivot_safe(cons, sn, broken)}
    assert "hostile-pair-positive" in kinds

    # hostile pair 1-2 gains a common positive neighbor 7
    sh = np.array(g.sign_hat)
    sh[1, 7] = sh[7, 1] = 1
    sh[2, 7] = sh[7, 2] = 1
    sh[0, 7] = sh[7, 0] = 1
    sh[3, 7] = sh[7, 3] = 1
    broken = AuxGraph(n=g.n, sign_hat=sh, edge_class=np.array(g.edge_class))
    kinds = {v[0] for v in verify_pivot_safe(cons, sn, broken)}
    assert "hostile-common-neighbor" in kinds


def test_pipeline_outputs_safe_and_invariant_clean():
    for seed in range(8):
        spec = GenSpec(n=12, k=3, p_noise=0.35, f=0.25, h=0.15, seed=seed)
        inst = generate(spec)
        for eps in (0.06, 0.45):
            cons, forced, g, budgets, sol, fixed, _ = prepare_constrained(inst, eps)
            sn = compute_supernodes(cons)
            dp = compute_dangerous_pairs(cons, sn)
            assert verify_pivot_safe(cons, sn, g) == []
            assert check_rounding_invariants(cons, sn, dp, g, sol) == []


def test_aux_graph_symmetric(sample8):
    cons, sn, dp, prog = constrained_parts(sample8)
    g = build_aux_constrained(cons, sn, dp, hand_solution(prog, HAND_SAMPLE8))
    assert np.array_equal(g.sign_hat, g.sign_hat.T)
    assert np.array_equal(g.edge_class, g.edge_class.T)
    assert np.all(np.diag(g.edge_class) == -1)
