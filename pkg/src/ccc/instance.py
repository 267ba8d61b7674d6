"""Problem data model: signed graphs with friendly/hostile constraints.

An instance is a complete signed graph on nodes 0..n-1 plus two disjoint
sets of node pairs: friendly pairs that must share a cluster and hostile
pairs that must not.  Connected components of the friendly graph are
"supernodes"; the consistent form of an instance makes every pair inside
a supernode positive and every pair spanning a hostile supernode pair
negative, counting how many signs had to change.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class InstanceFormatError(ValueError):
    """Raised for malformed instance files."""


class InfeasibleInstance(ValueError):
    """Raised when a hostile pair lies inside one friendly component."""


def _canon(u, v):
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class SignedInstance:
    """Complete signed graph with constraint pair sets.

    sign is a symmetric int8 matrix with +1/-1 off the diagonal and 0 on
    it; friendly and hostile hold canonical (u < v) pairs.
    """

    n: int
    sign: np.ndarray
    friendly: frozenset
    hostile: frozenset

    def __post_init__(self):
        if self.friendly & self.hostile:
            raise InstanceFormatError(
                "pairs listed as both friendly and hostile: %s"
                % sorted(self.friendly & self.hostile)
            )
        self.sign.setflags(write=False)

    def positive_pairs(self):
        """Canonical (u, v) arrays of all positive pairs."""
        iu, jv = np.nonzero(np.triu(self.sign, 1) > 0)
        return iu, jv


@dataclass(frozen=True)
class SupernodeStructure:
    """Friendly-component structure of an instance.

    s maps node -> supernode index; members lists each supernode's nodes in
    ascending order; hostile_superedges holds canonical supernode index
    pairs induced by the hostile node pairs.
    """

    s: np.ndarray
    members: tuple
    hostile_superedges: frozenset

    @property
    def comp(self) -> int:
        return len(self.members)

    def hostile_mask(self):
        """Dense boolean comp x comp matrix of hostile_superedges."""
        m = np.zeros((self.comp, self.comp), dtype=bool)
        for a, b in self.hostile_superedges:
            m[a, b] = m[b, a] = True
        return m


@dataclass(frozen=True)
class Clustering:
    """Node -> cluster id map; ids are 0..k-1, every id used."""

    assignment: np.ndarray

    def __post_init__(self):
        self.assignment.setflags(write=False)

    @property
    def num_clusters(self) -> int:
        return int(self.assignment.max()) + 1 if self.assignment.size else 0

    def clusters(self):
        """Clusters as lists of node ids, ordered by cluster id."""
        out = [[] for _ in range(self.num_clusters)]
        for u, c in enumerate(self.assignment):
            out[int(c)].append(u)
        return out


def make_instance(n, positives=(), friendly=(), hostile=()):
    """Build a SignedInstance from pair lists; unlisted pairs are negative."""
    sign = np.full((n, n), -1, dtype=np.int8)
    np.fill_diagonal(sign, 0)
    for u, v in positives:
        sign[u, v] = sign[v, u] = 1
    return SignedInstance(
        n=n,
        sign=sign,
        friendly=frozenset(_canon(u, v) for u, v in friendly),
        hostile=frozenset(_canon(u, v) for u, v in hostile),
    )


def parse_instance(text) -> SignedInstance:
    """Parse the `ccc v1` line format.

    Line 1 is ``ccc v1``, line 2 is ``nodes <n>``, then any number of
    ``positive|friendly|hostile <u> <v>`` lines.  ``#`` starts a comment.
    Undeclared pairs are negative.  Duplicate declarations of a pair within
    one category are an error, as is a pair both friendly and hostile.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            lines.append((ln, stripped))
    if not lines or lines[0][1] != "ccc v1":
        raise InstanceFormatError("line 1 must be exactly 'ccc v1'")
    if len(lines) < 2 or not lines[1][1].startswith("nodes "):
        raise InstanceFormatError("line 2 must be 'nodes <n>'")
    try:
        n = int(lines[1][1].split()[1])
    except (IndexError, ValueError):
        raise InstanceFormatError("bad node count: %r" % lines[1][1])
    if n < 1:
        raise InstanceFormatError("need at least one node")

    sign = np.full((n, n), -1, dtype=np.int8)
    np.fill_diagonal(sign, 0)
    seen = {"positive": set(), "friendly": set(), "hostile": set()}
    for ln, body in lines[2:]:
        parts = body.split()
        if len(parts) != 3 or parts[0] not in seen:
            raise InstanceFormatError("line %d: expected 'positive|friendly|hostile <u> <v>'" % ln)
        kind = parts[0]
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise InstanceFormatError("line %d: node ids must be integers" % ln)
        if not (0 <= u < n and 0 <= v < n):
            raise InstanceFormatError("line %d: node index out of range 0..%d" % (ln, n - 1))
        if u == v:
            raise InstanceFormatError("line %d: self-pair %d %d" % (ln, u, v))
        pair = _canon(u, v)
        if pair in seen[kind]:
            raise InstanceFormatError("line %d: duplicate %s pair %s" % (ln, kind, pair))
        seen[kind].add(pair)
        if kind == "positive":
            sign[u, v] = sign[v, u] = 1

    if seen["friendly"] & seen["hostile"]:
        raise InstanceFormatError(
            "pairs listed as both friendly and hostile: %s"
            % sorted(seen["friendly"] & seen["hostile"])
        )
    return SignedInstance(
        n=n,
        sign=sign,
        friendly=frozenset(seen["friendly"]),
        hostile=frozenset(seen["hostile"]),
    )


def format_instance(inst: SignedInstance) -> str:
    """Serialize an instance back to the `ccc v1` format."""
    out = ["ccc v1", "nodes %d" % inst.n]
    iu, jv = inst.positive_pairs()
    out.extend("positive %d %d" % (u, v) for u, v in zip(iu, jv))
    out.extend("friendly %d %d" % p for p in sorted(inst.friendly))
    out.extend("hostile %d %d" % p for p in sorted(inst.hostile))
    return "\n".join(out) + "\n"


def compute_supernodes(inst: SignedInstance) -> SupernodeStructure:
    """Group nodes into friendly components and lift hostile pairs to them.

    Supernode indices are assigned in ascending order of each component's
    smallest member, so downstream iteration orders are reproducible.

    Raises InfeasibleInstance if a hostile pair falls inside one component.
    """
    parent = list(range(inst.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in inst.friendly:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[max(ru, rv)] = min(ru, rv)

    roots = [find(u) for u in range(inst.n)]
    index_of = {}
    for u in range(inst.n):
        if roots[u] not in index_of:
            index_of[roots[u]] = len(index_of)
    s = np.array([index_of[r] for r in roots], dtype=np.int32)
    members = [[] for _ in range(len(index_of))]
    for u in range(inst.n):
        members[s[u]].append(u)

    hostile_super = set()
    for u, v in inst.hostile:
        a, b = int(s[u]), int(s[v])
        if a == b:
            raise InfeasibleInstance(
                "hostile pair (%d, %d) lies inside one friendly component" % (u, v)
            )
        hostile_super.add(_canon(a, b))

    return SupernodeStructure(
        s=s,
        members=tuple(tuple(m) for m in members),
        hostile_superedges=frozenset(hostile_super),
    )


def to_consistent_form(inst: SignedInstance):
    """Normalize signs to respect the constraint structure.

    Every pair inside a supernode becomes positive, every pair spanning a
    hostile supernode pair becomes negative; all other signs are unchanged.
    Returns (consistent instance, number of flipped pairs).  The flip count
    is exactly the cost any feasible clustering pays on the changed pairs,
    so original cost = consistent cost + count for feasible clusterings.
    """
    sn = compute_supernodes(inst)
    sign = np.array(inst.sign, dtype=np.int8)
    same_super = sn.s[:, None] == sn.s[None, :]
    hostile_pair = sn.hostile_mask()[sn.s[:, None], sn.s[None, :]]
    off_diag = ~np.eye(inst.n, dtype=bool)

    forced_pos = same_super & off_diag & (sign < 0)
    forced_neg = hostile_pair & (sign > 0)
    count = int(np.count_nonzero(np.triu(forced_pos | forced_neg, 1)))
    sign[forced_pos] = 1
    sign[forced_neg] = -1

    out = SignedInstance(n=inst.n, sign=sign, friendly=inst.friendly, hostile=inst.hostile)
    return out, count


def clustering_cost(inst: SignedInstance, c: Clustering) -> int:
    """Positive pairs split apart plus negative pairs kept together."""
    a = c.assignment
    same = a[:, None] == a[None, :]
    upper = np.triu(np.ones((inst.n, inst.n), dtype=bool), 1)
    mistakes = ((inst.sign > 0) & ~same) | ((inst.sign < 0) & same)
    return int(np.count_nonzero(mistakes & upper))


def is_feasible(inst: SignedInstance, c: Clustering) -> bool:
    """True iff friendly pairs share clusters and hostile pairs do not."""
    a = c.assignment
    for u, v in inst.friendly:
        if a[u] != a[v]:
            return False
    for u, v in inst.hostile:
        if a[u] == a[v]:
            return False
    return True


def normalize_assignment(raw) -> Clustering:
    """Relabel arbitrary cluster ids to 0..k-1 by first appearance."""
    raw = np.asarray(raw)
    seen = {}
    out = np.empty(raw.shape[0], dtype=np.int32)
    for i, c in enumerate(raw):
        key = int(c)
        if key not in seen:
            seen[key] = len(seen)
        out[i] = seen[key]
    return Clustering(assignment=out)
