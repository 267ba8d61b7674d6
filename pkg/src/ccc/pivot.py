"""Pivot clustering on an auxiliary graph.

Random mode picks uniform pivots from the surviving nodes.  Deterministic
mode picks the node minimizing num/den, where each surviving bad triangle
charges the edge opposite each of its corners: num counts opposite edges
that kept their original sign, den adds their budgets.  Budgets and LP
values live on a common dyadic grid, so all accounting is integer-exact
and the selection is reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .auxgraph import AuxGraph, EdgeClass
from .instance import Clustering, SignedInstance
from .lp import GRID, GRID_SCALE, LpSolution

_GRID_INT = int(GRID_SCALE)


@dataclass(frozen=True)
class EdgeBudgets:
    """Per-pair denominators y for the ratio rule.

    y is the float view; y_units holds the same numbers in integer grid
    units, which is what the selection arithmetic actually uses.
    """

    y: np.ndarray
    y_units: np.ndarray


@dataclass(frozen=True)
class PivotTrace:
    """One (pivot, members, num, den) record per round.

    num/den are the selected pivot's ratio parts at selection time; None
    for strategies that do not evaluate ratios.
    """

    records: tuple

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def make_budgets(g_hat: AuxGraph, sol: LpSolution, variant: str) -> EdgeBudgets:
    """Budget matrix: flat 2 on class B, 3x otherwise; plain x when friendly."""
    if variant not in ("constrained", "friendly", "hostile"):
        raise ValueError("unknown variant %r" % variant)
    units = np.rint(sol.x * GRID_SCALE).astype(np.int64)
    if variant == "friendly":
        y_units = units
    else:
        y_units = 3 * units
        y_units[g_hat.edge_class == EdgeClass.B] = 2 * _GRID_INT
    np.fill_diagonal(y_units, 0)
    return EdgeBudgets(y=y_units * GRID, y_units=y_units)


class TriangleIndex:
    """Incremental num/den aggregates over the surviving bad triangles.

    Reference implementation in NumPy; the jitted pivot loop maintains the
    same quantities and tests hold the two equal.  Each triangle stores,
    per corner, whether its opposite edge kept the original sign and that
    edge's budget; removing a cluster retires every triangle touching it.
    """

    def __init__(self, g_hat: AuxGraph, inst: SignedInstance, budgets: EdgeBudgets):
        n = g_hat.n
        tri = _kernels.enumerate_bad_triangles(np.asarray(g_hat.sign_hat))
        self.n = n
        self.triangles = tri
        t = tri.shape[0]
        self._keep = np.zeros((t, 3), dtype=np.int64)
        self._den_c = np.zeros((t, 3), dtype=np.int64)
        for j, (p, q) in enumerate(((1, 2), (0, 2), (0, 1))):
            u = tri[:, p]
            v = tri[:, q]
            self._keep[:, j] = (g_hat.sign_hat[u, v] == inst.sign[u, v]).astype(np.int64)
            self._den_c[:, j] = budgets.y_units[u, v]
        self.num = np.zeros(n, dtype=np.int64)
        self.den_units = np.zeros(n, dtype=np.int64)
        for j in range(3):
            np.add.at(self.num, tri[:, j], self._keep[:, j])
            np.add.at(self.den_units, tri[:, j], self._den_c[:, j])
        self.per_node = [np.nonzero((tri == u).any(axis=1))[0] for u in range(n)]
        self.tri_alive = np.ones(t, dtype=bool)
        self.node_alive = np.ones(n, dtype=bool)

    @property
    def den(self):
        return self.den_units * GRID

    def ratio_parts(self, p):
        """(num, den) of node p as (int, float on the dyadic grid)."""
        return int(self.num[p]), float(self.den_units[p] * GRID)

    def select_min(self) -> int:
        """Alive node with the smallest ratio; ties go to the smaller id."""
        best = -1
        for u in range(self.n):
            if not self.node_alive[u]:
                continue
            if best < 0 or _kernels.frac_lt(
                int(self.num[u]), int(self.den_units[u]),
                int(self.num[best]), int(self.den_units[best]),
            ):
                best = u
        if best < 0:
            raise ValueError("no alive nodes")
        return best

    def remove_cluster(self, nodes):
        self.node_alive[list(nodes)] = False
        touched = np.concatenate([self.per_node[u] for u in nodes]) if nodes else []
        if len(touched) == 0:
            return
        touched = np.unique(touched)
        touched = touched[self.tri_alive[touched]]
        self.tri_alive[touched] = False
        for j in range(3):
            w = self.triangles[touched, j]
            mask = self.node_alive[w]
            np.subtract.at(self.num, w[mask], self._keep[touched[mask], j])
            np.subtract.at(self.den_units, w[mask], self._den_c[touched[mask], j])


def _trace_from_assign(assign, pivots, nums=None, dens=None):
    records = []
    for cid, p in enumerate(pivots):
        members = tuple(int(u) for u in np.nonzero(assign == cid)[0])
        num = int(nums[cid]) if nums is not None else None
        den = float(dens[cid] * GRID) if dens is not None else None
        records.append((int(p), members, num, den))
    return PivotTrace(records=tuple(records))


def pivot_random(g_hat: AuxGraph, seed: int):
    """Uniform-random pivots from a splitmix64 stream; deterministic per seed."""
    n = g_hat.n
    sh = g_hat.sign_hat
    assign = np.full(n, -1, dtype=np.int32)
    alive = np.ones(n, dtype=bool)
    pivots = []
    state = int(seed)
    while alive.any():
        ids = np.nonzero(alive)[0]
        state, z = _kernels.splitmix64_py(state)
        p = int(ids[z % len(ids)])
        cluster = alive & ((sh[p] > 0) | (np.arange(n) == p))
        assign[cluster] = len(pivots)
        alive &= ~cluster
        pivots.append(p)
    return (
        Clustering(assignment=assign),
        _trace_from_assign(assign, pivots),
    )


def pivot_random_batch(g_hat: AuxGraph, inst: SignedInstance, seeds):
    """Assignments and consistent-form costs for many seeds at once.

    Draw-for-draw identical to repeated pivot_random calls with the same
    seeds; costs are evaluated against inst.sign.
    """
    seeds = np.asarray(seeds, dtype=np.uint64)
    return _kernels.pivot_rand_batch(
        np.asarray(g_hat.sign_hat), np.asarray(inst.sign), seeds
    )


def pivot_deterministic(
    g_hat: AuxGraph, inst: SignedInstance, budgets: EdgeBudgets
):
    """Ratio-minimizing pivot with incremental triangle maintenance.

    Convention: 0/0 counts as 0 and positive/0 as infinity, so triangle-free
    nodes are preferred and ties break to the smaller id.
    """
    sh = np.asarray(g_hat.sign_hat)
    sg = np.asarray(inst.sign)
    if _kernels.USE_NUMBA:
        tri = _kernels.enumerate_bad_triangles(sh)
        assign, pivots, nums, dens = _kernels.pivot_det(
            sh, sg, budgets.y_units, tri
        )
        return (
            Clustering(assignment=assign),
            _trace_from_assign(assign, pivots, nums, dens),
        )

    index = TriangleIndex(g_hat, inst, budgets)
    n = g_hat.n
    assign = np.full(n, -1, dtype=np.int32)
    pivots, nums, dens = [], [], []
    alive = np.ones(n, dtype=bool)
    while alive.any():
        p = index.select_min()
        nums.append(int(index.num[p]))
        dens.append(int(index.den_units[p]))
        cluster = np.nonzero(alive & ((sh[p] > 0) | (np.arange(n) == p)))[0]
        assign[cluster] = len(pivots)
        alive[cluster] = False
        index.remove_cluster(cluster.tolist())
        pivots.append(p)
    return (
        Clustering(assignment=assign),
        _trace_from_assign(assign, pivots, np.array(nums), np.array(dens)),
    )


def pivot_sequence(g_hat: AuxGraph, preferred):
    """Pivot following a preference order (first alive entry wins each round).

    Falls back to the smallest alive id once the list is exhausted.
    """
    n = g_hat.n
    sh = g_hat.sign_hat
    assign = np.full(n, -1, dtype=np.int32)
    alive = np.ones(n, dtype=bool)
    pivots = []
    queue = list(preferred)
    while alive.any():
        p = None
        while queue:
            cand = queue.pop(0)
            if alive[cand]:
                p = cand
                break
        if p is None:
            p = int(np.nonzero(alive)[0][0])
        cluster = alive & ((sh[p] > 0) | (np.arange(n) == p))
        assign[cluster] = len(pivots)
        alive &= ~cluster
        pivots.append(p)
    return (
        Clustering(assignment=assign),
        _trace_from_assign(assign, pivots),
    )
