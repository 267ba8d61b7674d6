"""Numba-accelerated kernels with pure NumPy/Python fallbacks.

Every hot loop in the package lives here in two flavours: an ``@njit``
version compiled lazily by numba, and a plain implementation used when
numba is unavailable or explicitly disabled via the environment variable
``CCC_DISABLE_NUMBA=1``.  Both flavours are deterministic; tests compare
them directly.
"""

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False


def _env_flag(name):
    return os.environ.get(name, "").strip().lower() in ("1", "true", "yes", "on")


USE_NUMBA = HAS_NUMBA and not _env_flag("CCC_DISABLE_NUMBA")

_U64 = np.uint64
_MASK32 = _U64(0xFFFFFFFF)
_SM_GAMMA = 0x9E3779B97F4A7C15
_SM_MIX1 = 0xBF58476D1CE4E5B9
_SM_MIX2 = 0x94D049BB133111EB
_GAMMA64 = _U64(_SM_GAMMA)
_MIX1_64 = _U64(_SM_MIX1)
_MIX2_64 = _U64(_SM_MIX2)
_PYMASK = (1 << 64) - 1


def splitmix64_py(state):
    """One step of the splitmix64 generator on a Python int state.

    Returns (new_state, output). Used by the fallback pivot sampler and by
    tests to predict the jitted sampler's draws.
    """
    state = (state + _SM_GAMMA) & _PYMASK
    z = state
    z = ((z ^ (z >> 30)) * _SM_MIX1) & _PYMASK
    z = ((z ^ (z >> 27)) * _SM_MIX2) & _PYMASK
    z = z ^ (z >> 31)
    return state, z


# ---------------------------------------------------------------------------
# bad-triangle enumeration
# ---------------------------------------------------------------------------


def _enumerate_bad_triangles_py(sign):
    """All node triples a<b<c with exactly one negative pair among the three.

    Enumerates by the unique negative base edge of each bad triangle, then
    sorts rows to match the jitted kernel's lexicographic order.
    """
    n = sign.shape[0]
    pos = sign > 0
    rows = []
    for a in range(n):
        for b in range(a + 1, n):
            if sign[a, b] >= 0:
                continue
            common = np.nonzero(pos[a] & pos[b])[0]
            for c in common:
                tri = sorted((a, b, int(c)))
                rows.append(tri)
    if not rows:
        return np.empty((0, 3), dtype=np.int32)
    out = np.array(rows, dtype=np.int32)
    order = np.lexsort((out[:, 2], out[:, 1], out[:, 0]))
    return out[order]


def _enumerate_bad_triangles_loop(sign):
    n = sign.shape[0]
    count = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                neg = 0
                if sign[a, b] < 0:
                    neg += 1
                if sign[a, c] < 0:
                    neg += 1
                if sign[b, c] < 0:
                    neg += 1
                if neg == 1:
                    count += 1
    out = np.empty((count, 3), dtype=np.int32)
    k = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                neg = 0
                if sign[a, b] < 0:
                    neg += 1
                if sign[a, c] < 0:
                    neg += 1
                if sign[b, c] < 0:
                    neg += 1
                if neg == 1:
                    out[k, 0] = a
                    out[k, 1] = b
                    out[k, 2] = c
                    k += 1
    return out


# ---------------------------------------------------------------------------
# covering-LP triangle rows over supernodes
# ---------------------------------------------------------------------------


def _triangle_rows_super_loop(hostile, pos_var, neg_var):
    """Rows X+_PR + X+_QR + X-_PQ >= 1 for supernode triples, after fixings.

    One row per ordered choice of negative-side pair (P<Q) and third
    supernode R.  Rows where some X+ term is fixed to 1 (hostile P,R or Q,R)
    are dropped as already satisfied; a hostile (P,Q) just removes the X-
    term.  Returns (cols, lens): cols is (rows, 3) int32 padded with -1.
    """
    comp = hostile.shape[0]
    count = 0
    for p in range(comp):
        for q in range(p + 1, comp):
            for r in range(comp):
                if r == p or r == q:
                    continue
                if hostile[p, r] or hostile[q, r]:
                    continue
                count += 1
    cols = np.full((count, 3), -1, dtype=np.int32)
    lens = np.empty(count, dtype=np.int8)
    k = 0
    for p in range(comp):
        for q in range(p + 1, comp):
            for r in range(comp):
                if r == p or r == q:
                    continue
                if hostile[p, r] or hostile[q, r]:
                    continue
                cols[k, 0] = pos_var[p, r]
                cols[k, 1] = pos_var[q, r]
                if hostile[p, q]:
                    lens[k] = 2
                else:
                    cols[k, 2] = neg_var[p, q]
                    lens[k] = 3
                k += 1
    return cols, lens


def _triangle_rows_super_py(hostile, pos_var, neg_var):
    comp = hostile.shape[0]
    cols_parts = []
    lens_parts = []
    all_r = np.arange(comp)
    for p in range(comp):
        for q in range(p + 1, comp):
            keep = (all_r != p) & (all_r != q) & ~hostile[p] & ~hostile[q]
            rs = all_r[keep]
            if rs.size == 0:
                continue
            block = np.full((rs.size, 3), -1, dtype=np.int32)
            block[:, 0] = pos_var[p, rs]
            block[:, 1] = pos_var[q, rs]
            if hostile[p, q]:
                lens_parts.append(np.full(rs.size, 2, dtype=np.int8))
            else:
                block[:, 2] = neg_var[p, q]
                lens_parts.append(np.full(rs.size, 3, dtype=np.int8))
            cols_parts.append(block)
    if not cols_parts:
        return np.empty((0, 3), dtype=np.int32), np.empty(0, dtype=np.int8)
    return np.concatenate(cols_parts), np.concatenate(lens_parts)


# ---------------------------------------------------------------------------
# multiplicative-weights covering solver
# ---------------------------------------------------------------------------

_MWU_OK = 0
_MWU_STUCK = 1
_MWU_CAP = 2


def _heap_push(keys, vars_, size, key, var):
    i = size
    keys[i] = key
    vars_[i] = var
    while i > 0:
        parent = (i - 1) >> 1
        if keys[parent] < keys[i] or (
            keys[parent] == keys[i] and vars_[parent] > vars_[i]
        ):
            keys[parent], keys[i] = keys[i], keys[parent]
            vars_[parent], vars_[i] = vars_[i], vars_[parent]
            i = parent
        else:
            break
    return size + 1


def _heap_pop(keys, vars_, size):
    top_key = keys[0]
    top_var = vars_[0]
    size -= 1
    keys[0] = keys[size]
    vars_[0] = vars_[size]
    i = 0
    while True:
        left = 2 * i + 1
        right = left + 1
        best = i
        if left < size and (
            keys[left] > keys[best]
            or (keys[left] == keys[best] and vars_[left] < vars_[best])
        ):
            best = left
        if right < size and (
            keys[right] > keys[best]
            or (keys[right] == keys[best] and vars_[right] < vars_[best])
        ):
            best = right
        if best == i:
            break
        keys[best], keys[i] = keys[i], keys[best]
        vars_[best], vars_[i] = vars_[i], vars_[best]
        i = best
    return top_key, top_var, size


def _mwu_logscore(vi, vindptr, vrows, vcoef, rowval, eta, logcost):
    lo = vindptr[vi]
    hi = vindptr[vi + 1]
    rmin = rowval[vrows[lo]]
    for t in range(lo + 1, hi):
        rv = rowval[vrows[t]]
        if rv < rmin:
            rmin = rv
    acc = 0.0
    for t in range(lo, hi):
        acc += vcoef[t] * np.exp(-eta * (rowval[vrows[t]] - rmin))
    return -eta * rmin + np.log(acc) - logcost


def _mwu_loop(
    vindptr,
    vrows,
    vcoef,
    cost,
    rowval,
    covered_thr,
    eta,
    theta,
    cap,
):
    """Greedy width-independent covering solve.

    Variables are raised in steps delta_i = theta/(eta*amax_i), always
    incrementing a variable of maximal score sum_j A_ji exp(-eta rows_j)/c_i.
    Scores are tracked in log space through a lazy max-heap; variables whose
    coefficients are uniform decay by exactly theta per step, letting runs of
    steps be applied in one batch without breaking the greedy order.
    Stops the moment every row reaches covered_thr.
    """
    nvars = cost.shape[0]
    nrows = rowval.shape[0]
    values = np.zeros(nvars, dtype=np.float64)
    uncovered = 0
    for j in range(nrows):
        if rowval[j] < covered_thr:
            uncovered += 1
    if uncovered == 0:
        return values, 0, _MWU_OK

    amax = np.zeros(nvars, dtype=np.float64)
    uniform = np.zeros(nvars, dtype=np.uint8)
    logcost = np.zeros(nvars, dtype=np.float64)
    for vi in range(nvars):
        lo = vindptr[vi]
        hi = vindptr[vi + 1]
        if lo == hi or cost[vi] <= 0.0:
            continue
        mx = vcoef[lo]
        mn = vcoef[lo]
        for t in range(lo + 1, hi):
            if vcoef[t] > mx:
                mx = vcoef[t]
            if vcoef[t] < mn:
                mn = vcoef[t]
        amax[vi] = mx
        uniform[vi] = 1 if mx == mn else 0
        logcost[vi] = np.log(cost[vi])

    heap_keys = np.empty(nvars + 1, dtype=np.float64)
    heap_vars = np.empty(nvars + 1, dtype=np.int64)
    size = 0
    for vi in range(nvars):
        if amax[vi] > 0.0:
            key = _mwu_logscore(vi, vindptr, vrows, vcoef, rowval, eta, logcost[vi])
            size = _heap_push(heap_keys, heap_vars, size, key, vi)

    increments = 0
    while uncovered > 0:
        if size == 0:
            return values, increments, _MWU_STUCK
        _, vi, size = _heap_pop(heap_keys, heap_vars, size)
        score = _mwu_logscore(vi, vindptr, vrows, vcoef, rowval, eta, logcost[vi])
        if size > 0 and score < heap_keys[0]:
            size = _heap_push(heap_keys, heap_vars, size, score, vi)
            continue
        delta = theta / (eta * amax[vi])
        lo = vindptr[vi]
        hi = vindptr[vi + 1]
        # steps until some currently uncovered row of vi crosses the threshold
        steps_cover = -1
        for t in range(lo, hi):
            rv = rowval[vrows[t]]
            if rv < covered_thr:
                need = (covered_thr - rv) / (vcoef[t] * delta)
                s = int(np.ceil(need))
                if s < 1:
                    s = 1
                if steps_cover < 0 or s < steps_cover:
                    steps_cover = s
        if size == 0 and steps_cover < 0:
            # only variable left cannot cover any remaining row
            return values, increments, _MWU_STUCK
        if uniform[vi] == 1 and size > 0:
            gap = score - heap_keys[0]
            steps_key = int(np.ceil(gap / theta))
            if steps_key < 1:
                steps_key = 1
        elif uniform[vi] == 1:
            steps_key = steps_cover if steps_cover > 0 else 1
        else:
            steps_key = 1
        steps = steps_key
        if steps_cover > 0 and steps_cover < steps:
            steps = steps_cover
        if steps < 1:
            steps = 1

        values[vi] += steps * delta
        for t in range(lo, hi):
            j = vrows[t]
            old = rowval[j]
            new = old + vcoef[t] * (steps * delta)
            rowval[j] = new
            if old < covered_thr and new >= covered_thr:
                uncovered -= 1
        increments += steps
        if increments > cap:
            return values, increments, _MWU_CAP
        if uncovered == 0:
            break
        if uniform[vi] == 1:
            size = _heap_push(heap_keys, heap_vars, size, score - steps * theta, vi)
        else:
            key = _mwu_logscore(vi, vindptr, vrows, vcoef, rowval, eta, logcost[vi])
            size = _heap_push(heap_keys, heap_vars, size, key, vi)
    return values, increments, _MWU_OK


# ---------------------------------------------------------------------------
# deterministic ratio pivot
# ---------------------------------------------------------------------------


def _umul128(a, b):
    a0 = a & _MASK32
    a1 = a >> _U64(32)
    b0 = b & _MASK32
    b1 = b >> _U64(32)
    ll = a0 * b0
    lh = a0 * b1
    hl = a1 * b0
    mid = (ll >> _U64(32)) + (lh & _MASK32) + (hl & _MASK32)
    lo = (ll & _MASK32) | ((mid & _MASK32) << _U64(32))
    hi = a1 * b1 + (lh >> _U64(32)) + (hl >> _U64(32)) + (mid >> _U64(32))
    return hi, lo


def _frac_lt(n1, d1, n2, d2):
    """Exact n1/d1 < n2/d2 on nonnegative int64, 0/0 == 0, k/0 == +inf."""
    if d1 == 0:
        if n1 == 0:
            n1, d1 = 0, 1
        else:
            n1, d1 = 1, 0
    if d2 == 0:
        if n2 == 0:
            n2, d2 = 0, 1
        else:
            n2, d2 = 1, 0
    h1, l1 = _umul128(_U64(n1), _U64(d2))
    h2, l2 = _umul128(_U64(n2), _U64(d1))
    if h1 != h2:
        return h1 < h2
    return l1 < l2


def _pivot_det_loop(sign_hat, sign_g, y_units, tri):
    """Ratio-rule pivot on the flipped graph with exact integer accounting.

    Every bad triangle of sign_hat contributes, at each of its three nodes,
    the edge opposite that node: a count of 1 to num if the opposite edge
    keeps its original sign, and the opposite edge's budget to den.  Each
    round clusters the node minimizing num/den (ties to the smaller id),
    compared exactly by 128-bit cross multiplication.
    """
    n = sign_hat.shape[0]
    t_count = tri.shape[0]

    deg = np.zeros(n, dtype=np.int64)
    for t in range(t_count):
        deg[tri[t, 0]] += 1
        deg[tri[t, 1]] += 1
        deg[tri[t, 2]] += 1
    indptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        indptr[u + 1] = indptr[u] + deg[u]
    fill = indptr[:-1].copy()
    tids = np.empty(indptr[n], dtype=np.int64)
    for t in range(t_count):
        for j in range(3):
            u = tri[t, j]
            tids[fill[u]] = t
            fill[u] += 1

    num_c = np.zeros((t_count, 3), dtype=np.int64)
    den_c = np.zeros((t_count, 3), dtype=np.int64)
    num = np.zeros(n, dtype=np.int64)
    den = np.zeros(n, dtype=np.int64)
    for t in range(t_count):
        a = tri[t, 0]
        b = tri[t, 1]
        c = tri[t, 2]
        for j in range(3):
            if j == 0:
                u, v, w = a, b, c
            elif j == 1:
                u, v, w = b, a, c
            else:
                u, v, w = c, a, b
            keep = 1 if sign_hat[v, w] == sign_g[v, w] else 0
            num_c[t, j] = keep
            den_c[t, j] = y_units[v, w]
            num[u] += keep
            den[u] += y_units[v, w]

    alive = np.ones(n, dtype=np.uint8)
    tri_alive = np.ones(t_count, dtype=np.uint8)
    assign = np.full(n, -1, dtype=np.int32)
    pivots = np.empty(n, dtype=np.int32)
    sel_num = np.empty(n, dtype=np.int64)
    sel_den = np.empty(n, dtype=np.int64)
    members = np.empty(n, dtype=np.int64)

    remaining = n
    rounds = 0
    while remaining > 0:
        best = -1
        for u in range(n):
            if alive[u] == 0:
                continue
            if best < 0 or _frac_lt(num[u], den[u], num[best], den[best]):
                best = u
        pivots[rounds] = best
        sel_num[rounds] = num[best]
        sel_den[rounds] = den[best]

        m_count = 0
        members[m_count] = best
        m_count += 1
        for v in range(n):
            if v != best and alive[v] == 1 and sign_hat[best, v] > 0:
                members[m_count] = v
                m_count += 1
        for k in range(m_count):
            u = members[k]
            assign[u] = rounds
            alive[u] = 0
        for k in range(m_count):
            u = members[k]
            for p in range(indptr[u], indptr[u + 1]):
                t = tids[p]
                if tri_alive[t] == 0:
                    continue
                tri_alive[t] = 0
                for j in range(3):
                    w = tri[t, j]
                    if alive[w] == 1:
                        num[w] -= num_c[t, j]
                        den[w] -= den_c[t, j]
        remaining -= m_count
        rounds += 1
    return assign, pivots[:rounds], sel_num[:rounds], sel_den[:rounds]


def _pivot_rand_batch_loop(sign_hat, sign_g, seeds):
    """Uniform random pivot, batched over seeds; returns assignments and costs."""
    n = sign_hat.shape[0]
    t_runs = seeds.shape[0]
    assigns = np.empty((t_runs, n), dtype=np.int32)
    costs = np.zeros(t_runs, dtype=np.int64)
    alive_ids = np.empty(n, dtype=np.int64)
    for run in range(t_runs):
        state = seeds[run]
        alive = np.ones(n, dtype=np.uint8)
        remaining = n
        cid = 0
        while remaining > 0:
            n_alive = 0
            for u in range(n):
                if alive[u] == 1:
                    alive_ids[n_alive] = u
                    n_alive += 1
            state = state + _GAMMA64
            z = state
            z = (z ^ (z >> _U64(30))) * _MIX1_64
            z = (z ^ (z >> _U64(27))) * _MIX2_64
            z = z ^ (z >> _U64(31))
            p = alive_ids[int(z % _U64(n_alive))]
            for u in range(n):
                if alive[u] == 1 and (u == p or sign_hat[p, u] > 0):
                    assigns[run, u] = cid
                    alive[u] = 0
                    remaining -= 1
            cid += 1
        c = 0
        for u in range(n):
            for v in range(u + 1, n):
                same = assigns[run, u] == assigns[run, v]
                if sign_g[u, v] > 0:
                    if not same:
                        c += 1
                else:
                    if same:
                        c += 1
        costs[run] = c
    return assigns, costs


def _pivot_rand_batch_py(sign_hat, sign_g, seeds):
    """Python-int fallback matching _pivot_rand_batch_loop draw for draw."""
    n = sign_hat.shape[0]
    t_runs = seeds.shape[0]
    assigns = np.empty((t_runs, n), dtype=np.int32)
    costs = np.zeros(t_runs, dtype=np.int64)
    pos = sign_hat > 0
    same_needed = sign_g > 0
    iu, ju = np.triu_indices(n, k=1)
    for run in range(t_runs):
        state = int(seeds[run])
        alive = np.ones(n, dtype=bool)
        cid = 0
        while alive.any():
            ids = np.nonzero(alive)[0]
            state, z = splitmix64_py(state)
            p = ids[z % len(ids)]
            cluster = alive & (pos[p] | (np.arange(n) == p))
            assigns[run, cluster] = cid
            alive &= ~cluster
            cid += 1
        row = assigns[run]
        same = row[iu] == row[ju]
        costs[run] = int(np.sum(same != same_needed[iu, ju]))
    return assigns, costs


# ---------------------------------------------------------------------------
# exact oracle: scan over restricted growth strings
# ---------------------------------------------------------------------------


def _oracle_scan_loop(w_pos, w_neg, host_a, host_b):
    """Best feasible partition of supernodes by exhaustive enumeration.

    w_pos[A,B] / w_neg[A,B] count positive/negative node pairs between
    supernodes A and B; hostile supernode pairs may not share a cluster.
    Returns (best_cost, best_labels, feasible_count).
    """
    comp = w_pos.shape[0]
    nh = host_a.shape[0]
    labels = np.zeros(comp, dtype=np.int64)
    maxpre = np.zeros(comp, dtype=np.int64)
    best = np.zeros(comp, dtype=np.int64)
    best_cost = np.int64(-1)
    feasible = np.int64(0)
    while True:
        ok = True
        for h in range(nh):
            if labels[host_a[h]] == labels[host_b[h]]:
                ok = False
                break
        if ok:
            feasible += 1
            cost = np.int64(0)
            for a in range(comp):
                for b in range(a + 1, comp):
                    if labels[a] == labels[b]:
                        cost += w_neg[a, b]
                    else:
                        cost += w_pos[a, b]
            if best_cost < 0 or cost < best_cost:
                best_cost = cost
                for a in range(comp):
                    best[a] = labels[a]
        i = comp - 1
        while i > 0 and labels[i] == maxpre[i - 1] + 1:
            i -= 1
        if i == 0:
            break
        labels[i] += 1
        if labels[i] > maxpre[i - 1]:
            maxpre[i] = labels[i]
        else:
            maxpre[i] = maxpre[i - 1]
        for j in range(i + 1, comp):
            labels[j] = 0
            maxpre[j] = maxpre[j - 1]
    return best_cost, best, feasible


# ---------------------------------------------------------------------------
# backend selection
# ---------------------------------------------------------------------------

if USE_NUMBA:
    _heap_push = njit(cache=True)(_heap_push)
    _heap_pop = njit(cache=True)(_heap_pop)
    _mwu_logscore = njit(cache=True)(_mwu_logscore)
    _umul128 = njit(cache=True)(_umul128)
    _frac_lt = njit(cache=True)(_frac_lt)
    enumerate_bad_triangles = njit(cache=True)(_enumerate_bad_triangles_loop)
    triangle_rows_super = njit(cache=True)(_triangle_rows_super_loop)
    mwu_loop = njit(cache=True)(_mwu_loop)
    pivot_det = njit(cache=True)(_pivot_det_loop)
    pivot_rand_batch = njit(cache=True)(_pivot_rand_batch_loop)
    oracle_scan = njit(cache=True)(_oracle_scan_loop)
else:
    enumerate_bad_triangles = _enumerate_bad_triangles_py
    triangle_rows_super = _triangle_rows_super_py
    mwu_loop = _mwu_loop
    pivot_det = _pivot_det_loop
    pivot_rand_batch = _pivot_rand_batch_py
    oracle_scan = _oracle_scan_loop


def frac_lt(n1, d1, n2, d2):
    """Exact comparison of nonnegative ratios (Python-int path, test oracle)."""
    if d1 == 0:
        n1, d1 = (0, 1) if n1 == 0 else (1, 0)
    if d2 == 0:
        n2, d2 = (0, 1) if n2 == 0 else (1, 0)
    return n1 * d2 < n2 * d1
