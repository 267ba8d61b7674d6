"""Auxiliary pivot graphs and edge classification.

The solve pipeline rounds LP values into a modified sign matrix and then
pivots on it.  Each variant has its own rounding rule; all of them keep
supernodes internally positive and hostile supernode pairs negative, which
is what makes any pivot order produce a feasible clustering.  Every pair
is also classified by its (original, rounded) sign combination; the "B"
class marks extracted-pair edges whose partner was flipped too, and gets
the flat budget later.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from . import _kernels
from .dangerous import DangerousPairing
from .instance import SignedInstance, SupernodeStructure
from .lp import LpSolution

TWO_THIRDS = 2.0 / 3.0
ONE_THIRD = 1.0 / 3.0


class EdgeClass(IntEnum):
    MM = 0  # negative in G, negative in aux
    MP = 1  # negative in G, positive in aux
    PP = 2  # positive in G, positive in aux
    B = 3   # flipped extracted edge whose partner is also flipped
    O = 4   # any other flipped positive edge


@dataclass(frozen=True)
class AuxGraph:
    """Rounded sign matrix plus per-pair class labels.

    sign_hat is int8 (+1/-1 off-diagonal, 0 diagonal); edge_class is int8
    holding EdgeClass values with -1 on the diagonal.
    """

    n: int
    sign_hat: np.ndarray
    edge_class: np.ndarray

    def __post_init__(self):
        self.sign_hat.setflags(write=False)
        self.edge_class.setflags(write=False)


def _classify(inst, sign_hat, b_edges):
    """Class matrix from (G, aux) sign combinations and the B edge set."""
    n = inst.n
    cls = np.full((n, n), -1, dtype=np.int8)
    off = ~np.eye(n, dtype=bool)
    gpos = inst.sign > 0
    hpos = sign_hat > 0
    cls[off & ~gpos & ~hpos] = EdgeClass.MM
    cls[off & ~gpos & hpos] = EdgeClass.MP
    cls[off & gpos & hpos] = EdgeClass.PP
    cls[off & gpos & ~hpos] = EdgeClass.O
    for u, v in b_edges:
        cls[u, v] = cls[v, u] = EdgeClass.B
    return cls


def _superedge_value_reps(inst, sn, x):
    """Representative X+ / X- value per superedge, read off the tied x map.

    Superedges with no positive (resp. negative) pair get the value the
    solver fixes for the missing side: such variables are weightless and
    preset to 1.
    """
    comp = sn.comp
    xp = np.ones((comp, comp), dtype=np.float64)
    xm = np.ones((comp, comp), dtype=np.float64)
    iu, jv = np.nonzero(np.triu(np.ones_like(inst.sign, dtype=bool), 1))
    sa = sn.s[iu]
    sb = sn.s[jv]
    pos = inst.sign[iu, jv] > 0
    xp[sa[pos], sb[pos]] = x[iu[pos], jv[pos]]
    xp[sb[pos], sa[pos]] = x[iu[pos], jv[pos]]
    xm[sa[~pos], sb[~pos]] = x[iu[~pos], jv[~pos]]
    xm[sb[~pos], sa[~pos]] = x[iu[~pos], jv[~pos]]
    return xp, xm


def build_aux_constrained(
    inst: SignedInstance,
    sn: SupernodeStructure,
    dp: DangerousPairing,
    sol: LpSolution,
) -> AuxGraph:
    """Threshold rounding for the constrained variant.

    A superedge (A,B) turns positive iff it still owns a positive edge
    outside the extracted set and X+_AB < min(X-_AB, 2/3), strictly;
    everything else (including every hostile superedge) is negative.
    Intra-supernode pairs are always positive.
    """
    comp = sn.comp
    s = sn.s
    xp, xm = _superedge_value_reps(inst, sn, sol.x)

    pos_cnt = np.zeros((comp, comp), dtype=np.int64)
    iu, jv = inst.positive_pairs()
    np.add.at(pos_cnt, (s[iu], s[jv]), 1)
    pos_cnt += pos_cnt.T.copy()
    for u, v in dp.e_d:
        a, b = s[u], s[v]
        pos_cnt[a, b] -= 1
        pos_cnt[b, a] -= 1

    super_pos = (pos_cnt > 0) & (xp < np.minimum(xm, TWO_THIRDS))
    np.fill_diagonal(super_pos, True)

    sign_hat = np.where(super_pos[s[:, None], s[None, :]], 1, -1).astype(np.int8)
    np.fill_diagonal(sign_hat, 0)

    b_edges = [
        e
        for e in dp.e_d
        if sign_hat[e[0], e[1]] < 0
        and sign_hat[dp.rho[e][0], dp.rho[e][1]] < 0
    ]
    return AuxGraph(n=inst.n, sign_hat=sign_hat, edge_class=_classify(inst, sign_hat, b_edges))


def build_aux_friendly(
    inst: SignedInstance, sn: SupernodeStructure, sol: LpSolution
) -> AuxGraph:
    """Majority rounding for the friendly variant: positive iff X- >= X+."""
    if inst.hostile:
        raise ValueError("friendly variant requires an empty hostile set")
    xp, xm = _superedge_value_reps(inst, sn, sol.x)
    super_pos = xm >= xp
    np.fill_diagonal(super_pos, True)
    sign_hat = np.where(super_pos[sn.s[:, None], sn.s[None, :]], 1, -1).astype(np.int8)
    np.fill_diagonal(sign_hat, 0)
    return AuxGraph(n=inst.n, sign_hat=sign_hat, edge_class=_classify(inst, sign_hat, []))


def build_aux_hostile(inst: SignedInstance, dp: DangerousPairing) -> AuxGraph:
    """Hostile variant: the original graph with extracted edges flipped negative."""
    if inst.friendly:
        raise ValueError("hostile variant requires an empty friendly set")
    sign_hat = np.array(inst.sign, dtype=np.int8)
    for u, v in dp.e_d:
        sign_hat[u, v] = sign_hat[v, u] = -1
    return AuxGraph(
        n=inst.n,
        sign_hat=sign_hat,
        edge_class=_classify(inst, sign_hat, list(dp.e_d)),
    )


def verify_pivot_safe(inst: SignedInstance, sn: SupernodeStructure, g_hat: AuxGraph):
    """Violations of the two pivot-safety conditions (empty list means safe).

    1. nodes of one supernode are pairwise positive and see identical
       neighborhoods outside the supernode;
    2. hostile supernode pairs are pairwise negative and share no positive
       neighbor.
    """
    sh = g_hat.sign_hat
    n = inst.n
    viols = []
    for members in sn.members:
        if len(members) < 2:
            continue
        idx = np.array(members)
        sub = sh[np.ix_(idx, idx)]
        off = ~np.eye(len(idx), dtype=bool)
        if np.any(sub[off] <= 0):
            bad = np.argwhere((sub <= 0) & off)[0]
            viols.append(("supernode-pair-negative", int(idx[bad[0]]), int(idx[bad[1]])))
        outside = np.ones(n, dtype=bool)
        outside[idx] = False
        rows = sh[idx][:, outside]
        for k in range(1, len(idx)):
            if np.any(rows[k] != rows[0]):
                viols.append(("neighborhood-mismatch", int(idx[0]), int(idx[k])))
    pos = sh > 0
    for a_sup, b_sup in sorted(sn.hostile_superedges):
        for a in sn.members[a_sup]:
            for b in sn.members[b_sup]:
                if sh[a, b] > 0:
                    viols.append(("hostile-pair-positive", a, b))
                common = np.nonzero(pos[a] & pos[b])[0]
                if common.size:
                    viols.append(("hostile-common-neighbor", a, b, int(common[0])))
    return viols


def check_rounding_invariants(
    inst: SignedInstance,
    sn: SupernodeStructure,
    dp: DangerousPairing,
    g_hat: AuxGraph,
    sol: LpSolution,
):
    """Exact structural checks tying LP values to the rounded graph.

    Returns a list of violation descriptions; all comparisons are exact
    (values live on a dyadic grid, and 1/3, 2/3 are never grid points).
    Checked facts: extracted pairs carry total value >= 1; kept-positive
    pairs sit strictly below 2/3; flipped or newly-positive pairs sit at or
    above 1/3; the B class is small against its own value mass; and every
    bad triangle of the aux graph spans three supernodes, with the
    three-indicator bound holding whenever its negative edge is not class B.
    """
    x = sol.x
    cls = g_hat.edge_class
    viols = []

    for e in sorted(dp.e_d):
        f = dp.rho[e]
        if x[e[0], e[1]] + x[f[0], f[1]] < 1.0:
            viols.append(("extracted-pair-value", e, f, x[e[0], e[1]] + x[f[0], f[1]]))

    iu, jv = np.nonzero(np.triu(np.ones((inst.n, inst.n), dtype=bool), 1))
    for u, v in zip(iu.tolist(), jv.tolist()):
        c = cls[u, v]
        if c == EdgeClass.PP and not (x[u, v] < TWO_THIRDS):
            viols.append(("kept-positive-value", (u, v), x[u, v]))
        if c in (EdgeClass.MP, EdgeClass.O) and not (x[u, v] >= ONE_THIRD):
            viols.append(("flip-value", (u, v), x[u, v]))

    b_pairs = [(u, v) for u, v in zip(iu.tolist(), jv.tolist()) if cls[u, v] == EdgeClass.B]
    if b_pairs:
        mass = sum(x[u, v] for u, v in b_pairs)
        if len(b_pairs) > 2.0 * mass:
            viols.append(("b-class-mass", len(b_pairs), mass))

    tri = _kernels.enumerate_bad_triangles(g_hat.sign_hat)
    s = sn.s
    for a, b, c in tri.tolist():
        if len({int(s[a]), int(s[b]), int(s[c])}) != 3:
            viols.append(("bad-triangle-supernodes", (a, b, c)))
            continue
        # locate the negative edge; the other two are positive in the aux graph
        pairs = [(a, b), (a, c), (b, c)]
        neg = [p for p in pairs if g_hat.sign_hat[p[0], p[1]] < 0][0]
        if cls[neg[0], neg[1]] == EdgeClass.B:
            continue
        # positive edges of the triangle that are positive in G, plus the
        # negative edge if it is negative in G
        lhs = 0
        for u, v in pairs:
            if (u, v) == neg:
                lhs += int(inst.sign[u, v] < 0)
            else:
                lhs += int(inst.sign[u, v] > 0)
        rhs = 3.0 * (x[a, b] + x[a, c] + x[b, c])
        if lhs > rhs:
            viols.append(("triangle-indicator", (a, b, c), lhs, rhs))
    return viols
