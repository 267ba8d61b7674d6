"""Covering LPs for the three problem variants plus a combinatorial solver.

All three programs are pure covering LPs (min c.x, Ax >= 1, 0 <= x <= 1)
obtained by eliminating the equality constraints of the formulations:
variable fixings (intra-supernode and hostile superedge values are known)
and the tying of node-pair values x_uv to their superedge variables are
applied at build time.  The solver is a width-independent multiplicative
weights loop; solutions are snapped upward onto a dyadic grid so that
feasibility, objectives, and every downstream budget comparison evaluate
exactly in double precision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .dangerous import DangerousPairing
from .heap import HeapConstraintSet
from .instance import SignedInstance, SupernodeStructure

GRID_BITS = 35
GRID_SCALE = float(2**GRID_BITS)
GRID = 1.0 / GRID_SCALE

ROW_TRIANGLE = 0
ROW_PAIRWISE = 1
ROW_HEAP = 2

_MWU_STUCK = _kernels._MWU_STUCK
_MWU_CAP = _kernels._MWU_CAP


class SolverError(RuntimeError):
    """Solver failed an internal guarantee; indicates a bug, not bad input."""


class LpBuildError(ValueError):
    """A row became unsatisfiable after variable fixing."""


@dataclass
class CoveringProgram:
    """Sparse covering LP with eliminated (fixed) variables recorded.

    Rows are stored CSR-style in (indptr, cols, coefs) with implicit
    right-hand side 1.  pair_var/pair_fixed tie every node pair uv to its
    value source: the free variable pair_var[u, v], or the constant
    pair_fixed[u, v] when pair_var[u, v] < 0.
    """

    var_count: int
    var_names: list
    objective: np.ndarray
    indptr: np.ndarray
    cols: np.ndarray
    coefs: np.ndarray
    fixed: dict
    fixed_objective: int
    n_nodes: int
    pair_var: np.ndarray
    pair_fixed: np.ndarray
    row_kinds: np.ndarray

    @property
    def row_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def rows(self):
        """Rows as lists of (variable index, coefficient) pairs."""
        out = []
        for r in range(self.row_count):
            lo, hi = self.indptr[r], self.indptr[r + 1]
            out.append(list(zip(self.cols[lo:hi].tolist(), self.coefs[lo:hi].tolist())))
        return out


@dataclass
class LpSolution:
    """Exactly feasible solution on the dyadic grid.

    objective_value includes the fixed-variable contribution; x maps every
    node pair to its tied value (symmetric matrix, zero diagonal).
    objective_units is the free-variable part in integer grid units.
    """

    values: np.ndarray
    objective_value: float
    x: np.ndarray
    objective_units: int
    increments: int


def _csr_from_parts(col_blocks, coef_blocks, len_blocks, kind_blocks):
    lens = np.concatenate(len_blocks) if len_blocks else np.empty(0, dtype=np.int64)
    indptr = np.zeros(len(lens) + 1, dtype=np.int64)
    np.cumsum(lens, out=indptr[1:])
    cols = (
        np.concatenate(col_blocks)
        if col_blocks
        else np.empty(0, dtype=np.int32)
    )
    coefs = (
        np.concatenate(coef_blocks)
        if coef_blocks
        else np.empty(0, dtype=np.float64)
    )
    kinds = (
        np.concatenate(kind_blocks)
        if kind_blocks
        else np.empty(0, dtype=np.int8)
    )
    return indptr, cols.astype(np.int32), coefs.astype(np.float64), kinds


def _superedge_counts(inst, sn):
    """Positive and total node-pair counts per supernode pair."""
    comp = sn.comp
    iu, jv = inst.positive_pairs()
    a = np.minimum(sn.s[iu], sn.s[jv]).astype(np.int64)
    b = np.maximum(sn.s[iu], sn.s[jv]).astype(np.int64)
    pos = np.zeros((comp, comp), dtype=np.int64)
    np.add.at(pos, (a, b), 1)
    sizes = np.array([len(m) for m in sn.members], dtype=np.int64)
    tot = sizes[:, None] * sizes[None, :]
    np.fill_diagonal(tot, sizes * (sizes - 1) // 2)
    return pos, tot


def _build_super_lp(inst, sn, heaps):
    comp = sn.comp
    hostile = sn.hostile_mask()
    pos_cnt, tot_cnt = _superedge_counts(inst, sn)

    pos_var = np.full((comp, comp), -1, dtype=np.int32)
    neg_var = np.full((comp, comp), -1, dtype=np.int32)
    var_names = []
    weights = []
    fixed = {}
    fixed_objective = 0
    for a in range(comp):
        fixed["X+(%d,%d)" % (a, a)] = 0
        fixed["X-(%d,%d)" % (a, a)] = 1
        fixed_objective += int(tot_cnt[a, a] - pos_cnt[a, a])
        for b in range(a + 1, comp):
            if hostile[a, b]:
                fixed["X+(%d,%d)" % (a, b)] = 1
                fixed["X-(%d,%d)" % (a, b)] = 0
                fixed_objective += int(pos_cnt[a, b])
                continue
            pos_var[a, b] = pos_var[b, a] = len(var_names)
            var_names.append("X+(%d,%d)" % (a, b))
            weights.append(int(pos_cnt[a, b]))
            neg_var[a, b] = neg_var[b, a] = len(var_names)
            var_names.append("X-(%d,%d)" % (a, b))
            weights.append(int(tot_cnt[a, b] - pos_cnt[a, b]))

    col_blocks, coef_blocks, len_blocks, kind_blocks = [], [], [], []

    tri_cols, tri_lens = _kernels.triangle_rows_super(hostile, pos_var, neg_var)
    if tri_cols.shape[0]:
        flat = tri_cols[tri_cols >= 0]
        col_blocks.append(flat)
        coef_blocks.append(np.ones(flat.shape[0]))
        len_blocks.append(tri_lens.astype(np.int64))
        kind_blocks.append(np.full(tri_lens.shape[0], ROW_TRIANGLE, dtype=np.int8))

    pair_rows = [
        (pos_var[a, b], neg_var[a, b])
        for a in range(comp)
        for b in range(a + 1, comp)
        if not hostile[a, b]
    ]
    if pair_rows:
        arr = np.array(pair_rows, dtype=np.int32)
        col_blocks.append(arr.reshape(-1))
        coef_blocks.append(np.ones(arr.size))
        len_blocks.append(np.full(arr.shape[0], 2, dtype=np.int64))
        kind_blocks.append(np.full(arr.shape[0], ROW_PAIRWISE, dtype=np.int8))

    if heaps is not None and len(heaps):
        h_cols, h_coefs, h_lens = [], [], []
        for triple in sorted(heaps.triples):
            mult = {}
            for u, v in triple:
                var = int(pos_var[sn.s[u], sn.s[v]])
                if var < 0:
                    raise LpBuildError(
                        "HEAP edge (%d,%d) maps to a fixed superedge variable" % (u, v)
                    )
                mult[var] = mult.get(var, 0) + 1
            items = sorted(mult.items())
            h_cols.extend(var for var, _ in items)
            h_coefs.extend(float(m) for _, m in items)
            h_lens.append(len(items))
        col_blocks.append(np.array(h_cols, dtype=np.int32))
        coef_blocks.append(np.array(h_coefs))
        len_blocks.append(np.array(h_lens, dtype=np.int64))
        kind_blocks.append(np.full(len(h_lens), ROW_HEAP, dtype=np.int8))

    indptr, cols, coefs, kinds = _csr_from_parts(
        col_blocks, coef_blocks, len_blocks, kind_blocks
    )
    if np.diff(indptr).min(initial=1) < 1:
        raise LpBuildError("a row lost all free variables after fixing")

    s = sn.s
    aa = s[:, None]
    bb = s[None, :]
    same = aa == bb
    hmask = hostile[aa, bb]
    sign = inst.sign
    pvar = np.where(sign > 0, pos_var[aa, bb], neg_var[aa, bb])
    pair_var = np.where(same | hmask, -1, pvar).astype(np.int32)
    pair_fixed = np.zeros((inst.n, inst.n), dtype=np.float64)
    pair_fixed[same & (sign < 0)] = 1.0
    pair_fixed[hmask & (sign > 0)] = 1.0

    return CoveringProgram(
        var_count=len(var_names),
        var_names=var_names,
        objective=np.array(weights, dtype=np.int64),
        indptr=indptr,
        cols=cols,
        coefs=coefs,
        fixed=fixed,
        fixed_objective=fixed_objective,
        n_nodes=inst.n,
        pair_var=pair_var,
        pair_fixed=pair_fixed,
        row_kinds=kinds,
    )


def build_constrained_lp(
    inst: SignedInstance,
    sn: SupernodeStructure,
    dp: DangerousPairing,
    heaps: HeapConstraintSet,
) -> CoveringProgram:
    """Superedge covering LP with triangle, pairwise, and HEAP rows.

    Free variables are X+/X- per non-hostile distinct superedge; hostile
    superedges are fixed at X+=1, X-=0 and intra-supernode values at X+=0,
    X-=1, with satisfied rows dropped.  Objective weights count the node
    pairs each variable represents.
    """
    return _build_super_lp(inst, sn, heaps)


def build_friendly_lp(inst: SignedInstance, sn: SupernodeStructure) -> CoveringProgram:
    """Constrained LP minus HEAP rows and hostile fixings; requires H empty."""
    if inst.hostile:
        raise ValueError("friendly variant requires an empty hostile set")
    return _build_super_lp(inst, sn, None)


def build_hostile_lp(inst: SignedInstance, dp: DangerousPairing = None) -> CoveringProgram:
    """Node-pair covering LP: one row per bad triangle, hostile pairs fixed 0.

    Requires F empty.  dp is accepted for interface symmetry with the other
    builders; the program itself does not depend on it.
    """
    if inst.friendly:
        raise ValueError("hostile variant requires an empty friendly set")
    n = inst.n
    sign = inst.sign

    hmask = np.zeros((n, n), dtype=bool)
    for u, v in inst.hostile:
        hmask[u, v] = hmask[v, u] = True

    pair_var = np.full((n, n), -1, dtype=np.int32)
    var_names = []
    fixed = {}
    for u in range(n):
        for v in range(u + 1, n):
            if hmask[u, v]:
                fixed["x(%d,%d)" % (u, v)] = 0
            else:
                pair_var[u, v] = pair_var[v, u] = len(var_names)
                var_names.append("x(%d,%d)" % (u, v))

    tri = _kernels.enumerate_bad_triangles(sign)
    col_blocks, coef_blocks, len_blocks, kind_blocks = [], [], [], []
    if tri.shape[0]:
        e1 = pair_var[tri[:, 0], tri[:, 1]]
        e2 = pair_var[tri[:, 0], tri[:, 2]]
        e3 = pair_var[tri[:, 1], tri[:, 2]]
        stacked = np.stack([e1, e2, e3], axis=1)
        lens = np.count_nonzero(stacked >= 0, axis=1).astype(np.int64)
        if lens.min() < 2:
            raise LpBuildError("bad triangle with fewer than two free variables")
        flat = stacked[stacked >= 0]
        col_blocks.append(flat)
        coef_blocks.append(np.ones(flat.shape[0]))
        len_blocks.append(lens)
        kind_blocks.append(np.full(lens.shape[0], ROW_TRIANGLE, dtype=np.int8))

    indptr, cols, coefs, kinds = _csr_from_parts(
        col_blocks, coef_blocks, len_blocks, kind_blocks
    )
    return CoveringProgram(
        var_count=len(var_names),
        var_names=var_names,
        objective=np.ones(len(var_names), dtype=np.int64),
        indptr=indptr,
        cols=cols,
        coefs=coefs,
        fixed=fixed,
        fixed_objective=0,
        n_nodes=n,
        pair_var=pair_var,
        pair_fixed=np.zeros((n, n), dtype=np.float64),
        row_kinds=kinds,
    )


def derive_x(prog: CoveringProgram, values: np.ndarray) -> np.ndarray:
    """Node-pair value matrix from free values plus fixed constants."""
    if prog.var_count == 0:
        x = prog.pair_fixed.copy()
    else:
        safe = np.clip(prog.pair_var, 0, None)
        x = np.where(prog.pair_var >= 0, values[safe], prog.pair_fixed)
    np.fill_diagonal(x, 0.0)
    return x


def row_sums(prog: CoveringProgram, values: np.ndarray) -> np.ndarray:
    if prog.row_count == 0:
        return np.empty(0, dtype=np.float64)
    row_ids = np.repeat(np.arange(prog.row_count), np.diff(prog.indptr))
    terms = prog.coefs * values[prog.cols]
    return np.bincount(row_ids, weights=terms, minlength=prog.row_count)


def check_feasibility(prog: CoveringProgram, values: np.ndarray):
    """Indices of rows with coverage strictly below 1 (exact comparison)."""
    sums = row_sums(prog, values)
    return np.nonzero(sums < 1.0)[0].tolist()


def solve_covering(prog: CoveringProgram, epsilon: float, seed: int = 0) -> LpSolution:
    """Approximately optimal exactly-feasible solution of a covering LP.

    Runs a greedy multiplicative-weights loop (most cost-effective variable
    first, step theta/(eta*A_max)), scales the result to exact coverage,
    clamps to [0,1] and rounds up onto the 2^-35 grid.  The returned
    objective is at most (1+epsilon) times the LP optimum; every row is
    satisfied exactly.  The solver is deterministic; seed is accepted for
    interface stability.

    Raises SolverError if internal guarantees break (iteration cap, a row
    no free variable can cover, or infeasibility after scaling).
    """
    del seed
    if not (0.0 < epsilon < 1.0):
        raise ValueError("epsilon must lie strictly between 0 and 1")
    if prog.var_count * GRID > 5e-4 * epsilon:
        raise ValueError(
            "epsilon %g too small for the dyadic value grid at %d variables"
            % (epsilon, prog.var_count)
        )

    cost = prog.objective.astype(np.float64)
    values = np.zeros(prog.var_count, dtype=np.float64)
    increments = 0
    if prog.row_count:
        # zero-cost variables that appear in some row are free coverage
        in_rows = np.zeros(prog.var_count, dtype=bool)
        in_rows[prog.cols] = True
        preset = (prog.objective == 0) & in_rows
        values[preset] = 1.0

        sums0 = row_sums(prog, values)
        keep = sums0 < 1.0
        if np.any(keep):
            kept_ids = np.nonzero(keep)[0]
            new_id = np.cumsum(keep) - 1
            row_ids = np.repeat(np.arange(prog.row_count), np.diff(prog.indptr))
            mask = keep[row_ids]
            ecols = prog.cols[mask]
            erows = new_id[row_ids[mask]].astype(np.int64)
            ecoefs = prog.coefs[mask]
            order = np.argsort(ecols, kind="stable")
            vrows = erows[order]
            vcoef = ecoefs[order]
            counts = np.bincount(ecols, minlength=prog.var_count)
            vindptr = np.zeros(prog.var_count + 1, dtype=np.int64)
            np.cumsum(counts, out=vindptr[1:])

            m = int(kept_ids.shape[0])
            eps_i = 0.999 * epsilon
            big_l = max(np.log(m), 1.0)
            eta = 4.0 * big_l / eps_i
            theta = eps_i / 4.0
            thr = 1.0 - eps_i / 4.0
            sumc = max(float(cost.sum()), 1.0)
            cap = 1000 + int(np.ceil(960.0 * big_l * sumc / (eps_i * eps_i)))

            rowval = sums0[keep].astype(np.float64)
            raised, increments, status = _kernels.mwu_loop(
                vindptr, vrows, vcoef, cost, rowval, thr, eta, theta, cap
            )
            increments = int(increments)
            if status == _MWU_STUCK:
                raise SolverError("row with no positive-cost variable left uncovered")
            if status == _MWU_CAP:
                raise SolverError("iteration cap exceeded (%d increments)" % increments)

            factor = (1.0 + 1e-12) / float(rowval.min())
            raised = np.minimum(raised * factor, 1.0)
            values = np.maximum(values, raised)

    values = np.minimum(np.ceil(values * GRID_SCALE) / GRID_SCALE, 1.0)
    violated = check_feasibility(prog, values)
    if violated:
        raise SolverError("infeasible after scaling; rows %r" % violated[:5])

    units = np.rint(values * GRID_SCALE).astype(np.int64)
    objective_units = int(np.dot(prog.objective, units))
    objective_value = float(prog.fixed_objective) + objective_units * GRID
    return LpSolution(
        values=values,
        objective_value=objective_value,
        x=derive_x(prog, values),
        objective_units=objective_units,
        increments=increments,
    )
