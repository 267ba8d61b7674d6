#!/usr/bin/env python3
"""Benchmark the jitted kernels against the pure-NumPy fallback.

Runs the full deterministic pipeline on planted instances under both
backends (CCC_DISABLE_NUMBA=1 selects the fallback), reports per-stage
wall time, and checks that both backends produce identical clusterings
and LP objectives.

Usage:
    python3 benchmarks/compare_backends.py [--sizes 40,80] [--seed 7]

Each backend runs in its own subprocess because the backend is chosen at
import time.  The fallback's LP loop is orders of magnitude slower, so
keep the sizes modest when it is in play.
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def worker(sizes, seed):
    from ccc import _kernels
    from ccc.gen import GenSpec, generate
    from ccc.solve import solve_constrained

    results = []
    for n in sizes:
        spec = GenSpec(n=n, k=12, p_noise=0.1, f=0.6, h=0.002, seed=seed)
        inst = generate(spec)
        t0 = time.perf_counter()
        report = solve_constrained(inst, epsilon=0.3)
        total = time.perf_counter() - t0
        results.append(
            {
                "n": n,
                "total": total,
                "timings": report.timings,
                "cost": report.cost,
                "lp_units": report.lp_objective_units,
                "assignment": report.clustering.assignment.tolist(),
            }
        )
    print(json.dumps({"numba": _kernels.USE_NUMBA, "results": results}))


def run_backend(disable_numba, sizes, seed):
    env = dict(os.environ)
    if disable_numba:
        env["CCC_DISABLE_NUMBA"] = "1"
    else:
        env.pop("CCC_DISABLE_NUMBA", None)
    cmd = [
        sys.executable,
        os.path.abspath(__file__),
        "--worker",
        "--sizes",
        ",".join(str(n) for n in sizes),
        "--seed",
        str(seed),
    ]
    out = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", default="40,80")
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    if args.worker:
        worker(sizes, args.seed)
        return 0

    print("warming up jit cache ...")
    run_backend(False, [20], args.seed)
    fast = run_backend(False, sizes, args.seed)
    slow = run_backend(True, sizes, args.seed)
    if not fast["numba"]:
        print("note: numba unavailable, both runs used the NumPy fallback")

    print(f"{'n':>6} {'jit total':>10} {'numpy total':>12} {'speedup':>8}   match")
    ok = True
    for a, b in zip(fast["results"], slow["results"]):
        same = (
            a["cost"] == b["cost"]
            and a["lp_units"] == b["lp_units"]
            and a["assignment"] == b["assignment"]
        )
        ok = ok and same
        ratio = b["total"] / a["total"] if a["total"] > 0 else float("inf")
        print(
            f"{a['n']:>6} {a['total']:>9.3f}s {b['total']:>11.3f}s "
            f"{ratio:>7.1f}x   {'yes' if same else 'NO'}"
        )
    for a in fast["results"]:
        stages = ", ".join(f"{k}={v:.3f}s" for k, v in a["timings"].items())
        print(f"  n={a['n']} jit stages: {stages}")
    if not ok:
        print("BACKEND MISMATCH: outputs differ between backends", file=sys.stderr)
        return 1
    print("backends agree on all sizes")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
