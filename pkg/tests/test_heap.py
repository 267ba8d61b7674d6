"""Extra covering triples derived from the extracted dangerous pairs."""

from ccc.dangerous import compute_dangerous_pairs
from ccc.gen import GenSpec, generate
from ccc.heap import find_heaps
from ccc.instance import compute_supernodes, make_instance, to_consistent_form
from ccc.oracle import iter_feasible_clusterings


def canon(u, v):
    return (u, v) if u < v else (v, u)


def prepared(inst):
    cons, _ = to_consistent_form(inst)
    sn = compute_supernodes(cons)
    dp = compute_dangerous_pairs(cons, sn)
    return cons, sn, dp


def brute_force_triples(cons, sn, dp):
    """Triples {ab, bc, rho(ac)} recomputed directly from the definition."""
    out = set()
    for a, c in dp.e_d:
        partner = dp.rho[(a, c)]
        banned = {int(u) for u in (a, c)}
        for b in range(cons.n):
            if sn.s[b] == sn.s[a] or sn.s[b] == sn.s[c] or b in banned:
                continue
            if cons.sign[a, b] > 0 and cons.sign[b, c] > 0:
                out.add(tuple(sorted((canon(a, b), canon(b, c), partner))))
    return out


def test_four_node_example():
    inst = make_instance(
        4, positives=[(0, 1), (0, 2), (1, 2), (2, 3)], hostile=[(0, 3)]
    )
    cons, sn, dp = prepared(inst)
    assert dp.pairs == (((0, 2), (2, 3)),)
    heaps = find_heaps(cons, sn, dp)
    assert heaps.triples == frozenset({((0, 1), (1, 2), (2, 3))})
    assert len(heaps) == 1


def test_sample8_no_heaps(sample8):
    cons, sn, dp = prepared(sample8)
    heaps = find_heaps(cons, sn, dp)
    assert len(heaps) == 0


def test_no_dangerous_pairs_no_heaps():
    inst = make_instance(4, positives=[(0, 1), (1, 2)])
    cons, sn, dp = prepared(inst)
    assert len(find_heaps(cons, sn, dp)) == 0


def test_matches_brute_force_enumeration():
    for seed in range(15):
        spec = GenSpec(n=12, k=3, p_noise=0.4, f=0.15, h=0.15, seed=seed)
        cons, sn, dp = prepared(generate(spec))
        heaps = find_heaps(cons, sn, dp)
        assert set(heaps.triples) == brute_force_triples(cons, sn, dp), seed


def test_triples_are_valid_covering_constraints():
    # In every feasible clustering at least one edge of each triple is cut;
    # merging all three edges would put a hostile supernode pair together.
    for seed in range(10):
        spec = GenSpec(n=8, k=3, p_noise=0.4, f=0.1, h=0.25, seed=seed)
        inst = generate(spec)
        cons, sn, dp = prepared(inst)
        heaps = find_heaps(cons, sn, dp)
        if not len(heaps):
            continue
        for clustering in iter_feasible_clusterings(inst):
            a = clustering.assignment
            for triple in heaps.triples:
                cut = sum(1 for u, v in triple if a[u] != a[v])
                assert cut >= 1, (seed, triple)


def test_heap_edges_are_positive_inter_supernode():
    for seed in range(10):
        spec = GenSpec(n=10, k=3, p_noise=0.5, f=0.1, h=0.2, seed=seed)
        cons, sn, dp = prepared(generate(spec))
        heaps = find_heaps(cons, sn, dp)
        for triple in heaps.triples:
            for u, v in triple:
                assert cons.sign[u, v] > 0
                assert sn.s[u] != sn.s[v]
            assert any(e in dp.e_d for e in triple)
