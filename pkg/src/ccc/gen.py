"""Instance generators for tests and benchmarks.

Instances come from a planted-partition model: nodes are split into k
clusters, pair signs follow the planted partition with independent noise
flips, friendly pairs are sampled inside planted clusters and hostile
pairs across them.  Constraints always agree with the planted partition,
so generated instances are feasible by construction.  A splitmix64 stream
drives all randomness, making every output a pure function of the seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._kernels import splitmix64_py
from .instance import SignedInstance, make_instance, normalize_assignment

_U64_MASK = 2**64 - 1


class _Rng:
    """Minimal splitmix64-backed sampler (uniform, ranges, partial shuffles)."""

    def __init__(self, seed: int):
        self.state = int(seed) & _U64_MASK

    def next_u64(self) -> int:
        self.state, z = splitmix64_py(self.state)
        return z

    def uniform(self) -> float:
        return self.next_u64() / 2.0**64

    def randrange(self, k: int) -> int:
        return self.next_u64() % k

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.randrange(i + 1)
            items[i], items[j] = items[j], items[i]

    def sample(self, items: list, count: int) -> list:
        """First count entries of a partial Fisher-Yates pass (order-free)."""
        picked = list(items)
        for i in range(min(count, len(picked))):
            j = i + self.randrange(len(picked) - i)
            picked[i], picked[j] = picked[j], picked[i]
        return picked[:count]


@dataclass(frozen=True)
class GenSpec:
    """Planted-partition generator parameters."""

    n: int
    k: int
    p_noise: float = 0.0
    f: float = 0.0
    h: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if not (1 <= self.k <= self.n):
            raise ValueError("k must lie in [1, n]")
        if not (0.0 <= self.p_noise <= 1.0):
            raise ValueError("p_noise must lie in [0, 1]")
        if self.f < 0.0 or self.h < 0.0 or self.f + self.h > 1.0:
            raise ValueError("need f, h >= 0 and f + h <= 1")


def _planted_labels(spec: GenSpec, rng: _Rng) -> list:
    """Random partition into exactly k nonempty clusters."""
    perm = list(range(spec.n))
    rng.shuffle(perm)
    labels = [0] * spec.n
    for i, u in enumerate(perm):
        labels[u] = i if i < spec.k else rng.randrange(spec.k)
    return labels


def generate_with_truth(spec: GenSpec):
    """Generated instance together with its planted partition."""
    rng = _Rng(spec.seed)
    labels = _planted_labels(spec, rng)
    positives = []
    intra = []
    inter = []
    for u in range(spec.n):
        for v in range(u + 1, spec.n):
            same = labels[u] == labels[v]
            (intra if same else inter).append((u, v))
            if same != (rng.uniform() < spec.p_noise):
                positives.append((u, v))
    friendly = rng.sample(intra, int(round(spec.f * len(intra))))
    hostile = rng.sample(inter, int(round(spec.h * len(inter))))
    inst = make_instance(spec.n, positives, friendly, hostile)
    truth = normalize_assignment(np.array(labels, dtype=np.int64))
    return inst, truth


def generate(spec: GenSpec) -> SignedInstance:
    """Feasible planted-partition instance, deterministic per seed."""
    inst, _ = generate_with_truth(spec)
    return inst


def generate_inconsistent(
    spec: GenSpec, friendly_flips: int = 1, hostile_flips: int = 1
) -> SignedInstance:
    """Like generate, then contradict some constraints by sign flips.

    Up to friendly_flips friendly pairs are re-signed negative and up to
    hostile_flips hostile pairs re-signed positive, so the consistent-form
    conversion has real work to do.  Zero flips reproduce generate(spec).
    """
    inst, _ = generate_with_truth(spec)
    rng = _Rng(spec.seed ^ 0x5EED1DEA)
    iu, ju = inst.positive_pairs()
    pos = set(zip(iu.tolist(), ju.tolist()))
    friendly_pool = sorted(p for p in inst.friendly if p in pos)
    hostile_pool = sorted(p for p in inst.hostile if p not in pos)
    drop = set(rng.sample(friendly_pool, friendly_flips))
    add = rng.sample(hostile_pool, hostile_flips)
    positives = sorted((pos - drop) | set(add))
    return make_instance(inst.n, positives, inst.friendly, inst.hostile)


def generate_infeasible(spec: GenSpec) -> SignedInstance:
    """Instance whose friendly closure connects a hostile pair (error-path tests)."""
    if spec.n < 3:
        raise ValueError("need n >= 3 to build an infeasible instance")
    inst, _ = generate_with_truth(spec)
    iu, ju = inst.positive_pairs()
    pos = set(zip(iu.tolist(), ju.tolist()))
    chain = {(0, 1), (1, 2)}
    friendly = (set(inst.friendly) | chain) - {(0, 2)}
    hostile = (set(inst.hostile) - chain) | {(0, 2)}
    return make_instance(inst.n, sorted(pos), sorted(friendly), sorted(hostile))
