"""Exact brute-force solver and slow reference computations for tests.

The exact solver enumerates partitions of the supernodes (not the raw
nodes), which keeps common test instances to a handful of partitions, and
filters out partitions that merge a hostile supernode pair.  A guard on
the supernode count keeps runtimes in the seconds.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .auxgraph import AuxGraph
from .instance import (
    Clustering,
    SignedInstance,
    compute_supernodes,
    normalize_assignment,
    to_consistent_form,
)
from .pivot import EdgeBudgets

MAX_SUPERNODES = 12


class TooLarge(ValueError):
    """Instance exceeds the brute-force enumeration guard."""


@dataclass(frozen=True)
class ExactResult:
    """Optimal feasible clustering found by exhaustive enumeration.

    opt_cost is measured on the consistent form of the input instance;
    num_feasible counts the feasible supernode partitions examined.
    """

    opt_cost: int
    opt_clustering: Clustering
    num_feasible: int


def _contract(inst: SignedInstance, sn):
    """Positive/negative pair counts between supernodes, plus intra constant."""
    comp = sn.comp
    s = sn.s
    iu, ju = np.triu_indices(inst.n, k=1)
    sa = s[iu]
    sb = s[ju]
    pos = inst.sign[iu, ju] > 0
    w_pos = np.zeros((comp, comp), dtype=np.int64)
    w_neg = np.zeros((comp, comp), dtype=np.int64)
    inter = sa != sb
    np.add.at(w_pos, (sa[inter & pos], sb[inter & pos]), 1)
    np.add.at(w_neg, (sa[inter & ~pos], sb[inter & ~pos]), 1)
    w_pos += w_pos.T.copy()
    w_neg += w_neg.T.copy()
    intra_neg = int(np.count_nonzero(~pos & ~inter))
    return w_pos, w_neg, intra_neg


def exact_opt(inst0: SignedInstance) -> ExactResult:
    """Minimum-cost feasible clustering, by enumeration over supernodes.

    Works on the consistent form, so opt_cost excludes forced mistakes;
    ties break to the first partition in restricted-growth-string order.
    """
    inst, _ = to_consistent_form(inst0)
    sn = compute_supernodes(inst)
    if sn.comp > MAX_SUPERNODES:
        raise TooLarge(
            "instance has %d supernodes, enumeration guard is %d"
            % (sn.comp, MAX_SUPERNODES)
        )
    w_pos, w_neg, intra_neg = _contract(inst, sn)
    host = sorted(sn.hostile_superedges)
    host_a = np.array([a for a, _ in host], dtype=np.int64)
    host_b = np.array([b for _, b in host], dtype=np.int64)
    best_cost, best_labels, feasible = _kernels.oracle_scan(
        w_pos, w_neg, host_a, host_b
    )
    assign = best_labels[sn.s]
    return ExactResult(
        opt_cost=int(best_cost) + intra_neg,
        opt_clustering=normalize_assignment(assign),
        num_feasible=int(feasible),
    )


def _rgs_strings(m: int):
    """All restricted-growth strings of length m, in lexicographic order."""
    labels = np.zeros(m, dtype=np.int64)
    maxpre = np.zeros(m, dtype=np.int64)
    while True:
        yield labels
        i = m - 1
        while i > 0 and labels[i] == maxpre[i] + 1:
            i -= 1
        if i == 0:
            return
        labels[i] += 1
        for j in range(i + 1, m):
            labels[j] = 0
            maxpre[j] = max(maxpre[i], labels[i]) if j == i + 1 else max(
                maxpre[j - 1], labels[j - 1]
            )


def iter_feasible_clusterings(inst: SignedInstance):
    """Yield every feasible clustering, in supernode-enumeration order.

    Feasibility depends only on the constraint sets, so the iteration is
    the same for an instance and its consistent form.
    """
    sn = compute_supernodes(inst)
    if sn.comp > MAX_SUPERNODES:
        raise TooLarge(
            "instance has %d supernodes, enumeration guard is %d"
            % (sn.comp, MAX_SUPERNODES)
        )
    host = sorted(sn.hostile_superedges)
    for labels in _rgs_strings(sn.comp):
        if any(labels[a] == labels[b] for a, b in host):
            continue
        yield normalize_assignment(labels[sn.s])


def num_feasible_clusterings(inst: SignedInstance) -> int:
    return sum(1 for _ in iter_feasible_clusterings(inst))


def slow_ratio_check(
    g_hat: AuxGraph,
    inst: SignedInstance,
    budgets: EdgeBudgets,
    surviving,
    p: int,
):
    """Pivot aggregates of node p over the surviving set, recomputed directly.

    Scans all surviving pairs {v, w}; whenever {p, v, w} is a bad triangle
    of the surviving part of the auxiliary graph, the opposite edge vw adds
    1 to num if it kept its original sign, and its budget to den.  Returns
    (num, den) with den in integer grid units so equality tests against the
    incremental index are exact.
    """
    alive = np.zeros(g_hat.n, dtype=bool)
    alive[list(surviving)] = True
    alive[p] = True
    ids = [v for v in np.nonzero(alive)[0] if v != p]
    sh = g_hat.sign_hat
    num = 0
    den = 0
    for i, v in enumerate(ids):
        for w in ids[i + 1 :]:
            neg = int(sh[p, v] < 0) + int(sh[p, w] < 0) + int(sh[v, w] < 0)
            if neg != 1:
                continue
            if sh[v, w] == inst.sign[v, w]:
                num += 1
            den += int(budgets.y_units[v, w])
    return num, den
