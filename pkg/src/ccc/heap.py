"""HEAP constraint triples: hostile edge and positives.

For every extracted edge ac and outside node b adjacent to both ends by
positive edges, any feasible clustering must cut ab, cut bc, or pay for
the partner edge rho(ac); the triple {ab, bc, rho(ac)} becomes a covering
row over the corresponding positive-side LP variables.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dangerous import DangerousPairing
from .instance import SignedInstance, SupernodeStructure


@dataclass(frozen=True)
class HeapConstraintSet:
    """Canonical triples of positive edges, one covering row each.

    Each triple is a sorted tuple of three canonical (u < v) edges kept
    with multiset semantics: a repeated edge (degenerate collision with the
    partner edge) stays repeated so LP rows pick up its multiplicity.
    """

    triples: frozenset

    def __len__(self):
        return len(self.triples)


def _canon(u, v):
    return (u, v) if u < v else (v, u)


def find_heaps(
    inst: SignedInstance, sn: SupernodeStructure, dp: DangerousPairing
) -> HeapConstraintSet:
    """All triples {ab, bc, rho(ac)} for ac in E_D, b outside S(a) and S(c).

    b must connect to both a and c by positive edges. Triples are
    deduplicated after canonicalization; discovery order is irrelevant.
    """
    sign = inst.sign
    s = sn.s
    triples = set()
    for a, c in sorted(dp.e_d):
        partner = dp.rho[(a, c)]
        sa, sc = s[a], s[c]
        for b in range(inst.n):
            if s[b] == sa or s[b] == sc:
                continue
            if sign[a, b] > 0 and sign[b, c] > 0:
                triple = tuple(sorted((_canon(a, b), _canon(b, c), partner)))
                triples.add(triple)
    return HeapConstraintSet(triples=frozenset(triples))
