"""Greedy extraction of a maximal edge-disjoint set of dangerous pairs.

A dangerous pair is an ordered pair of positive inter-supernode edges
((a,b),(c,d)) whose inner endpoints b,c share a supernode while the outer
supernodes (S(a),S(d)) are hostile.  Clustering both edges' endpoints
together would merge a hostile supernode pair, so at least one of the two
edges must be cut; the partner map rho pairs each extracted edge with the
other half of its pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .instance import SignedInstance, SupernodeStructure


@dataclass(frozen=True)
class DangerousPairing:
    """Maximal edge-disjoint dangerous pairs plus the partner involution.

    pairs keeps the orientation ((a,b),(c,d)): the shared supernode holds b
    and c, and (S(a),S(d)) is hostile.  e_d and rho use canonical (u < v)
    edges; rho swaps the two edges of each pair.
    """

    pairs: tuple
    e_d: frozenset
    rho: dict = field(hash=False)


def _canon(u, v):
    return (u, v) if u < v else (v, u)


def is_dangerous_pair(sn: SupernodeStructure, e, f) -> bool:
    """True if distinct edges e, f admit an orientation forming a dangerous pair."""
    if _canon(*e) == _canon(*f):
        return False
    host = sn.hostile_superedges
    for a, b in (e, e[::-1]):
        for c, d in (f, f[::-1]):
            if sn.s[b] == sn.s[c] and _canon(int(sn.s[a]), int(sn.s[d])) in host:
                return True
    return False


def compute_dangerous_pairs(
    inst: SignedInstance, sn: SupernodeStructure
) -> DangerousPairing:
    """Greedy maximal matching of positive inter-supernode edges into pairs.

    Iterates positive edges ab (s(a) != s(b)) in ascending lexicographic
    order; for each, scans third supernodes D in ascending index order and
    pairs ab with the lexicographically smallest unused positive edge of the
    matching superedge, trying the (S(a),D)-hostile branch before the
    (S(b),D)-hostile branch.  Input must be in consistent form.
    """
    s = sn.s
    host = sn.hostile_superedges
    iu, jv = inst.positive_pairs()

    buckets = {}
    edges = []
    for u, v in zip(iu.tolist(), jv.tolist()):
        a, b = int(s[u]), int(s[v])
        if a == b:
            continue
        edges.append((u, v))
        buckets.setdefault(_canon(a, b), []).append((u, v))
    ptr = {k: 0 for k in buckets}

    e_d = set()
    rho = {}
    pairs = []

    def take_unused(key):
        # lexicographically smallest positive edge of this superedge not yet used
        lst = buckets.get(key)
        if lst is None:
            return None
        p = ptr[key]
        while p < len(lst) and lst[p] in e_d:
            p += 1
        ptr[key] = p
        return lst[p] if p < len(lst) else None

    def orient(edge, shared):
        u, v = edge
        return (u, v) if s[u] == shared else (v, u)

    for u, v in edges:
        if (u, v) in e_d:
            continue
        pq = (int(s[u]), int(s[v]))
        for d_super in range(sn.comp):
            if d_super in pq:
                continue
            hit = None
            if _canon(pq[0], d_super) in host:
                other = take_unused(_canon(pq[1], d_super))
                if other is not None:
                    # shared supernode is S(v); v sits second in the first edge
                    c, dd = orient(other, pq[1])
                    hit = ((u, v), (c, dd))
            if hit is None and _canon(pq[1], d_super) in host:
                other = take_unused(_canon(pq[0], d_super))
                if other is not None:
                    c, dd = orient(other, pq[0])
                    hit = ((v, u), (c, dd))
            if hit is not None:
                first, second = hit
                e1, e2 = _canon(*first), _canon(*second)
                e_d.add(e1)
                e_d.add(e2)
                rho[e1] = e2
                rho[e2] = e1
                pairs.append(hit)
                break

    return DangerousPairing(pairs=tuple(pairs), e_d=frozenset(e_d), rho=rho)
