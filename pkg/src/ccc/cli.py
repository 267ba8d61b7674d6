"""Command-line interface.

Subcommands: solve, exact, gen, lp, dump-dangerous, dump-heaps, dump-aux.
Instance files use the `ccc v1` line format; clustering output follows the
JSON shape {"clusters": ..., "cost": ..., "forced_mistakes": ...,
"feasible": ...}.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .auxgraph import (
    EdgeClass,
    build_aux_constrained,
    build_aux_friendly,
    build_aux_hostile,
)
from .dangerous import compute_dangerous_pairs
from .gen import GenSpec, generate, generate_inconsistent, generate_infeasible
from .heap import find_heaps
from .instance import (
    InfeasibleInstance,
    InstanceFormatError,
    compute_supernodes,
    format_instance,
    parse_instance,
    to_consistent_form,
)
from .lp import (
    SolverError,
    build_constrained_lp,
    build_friendly_lp,
    build_hostile_lp,
    solve_covering,
)
from .oracle import TooLarge, exact_opt
from .solve import (
    DEFAULT_EPSILON,
    CertificateError,
    run_random_trials,
    solve_auto,
    solve_constrained,
    solve_friendly,
    solve_hostile,
)

_CLASS_NAMES = {
    EdgeClass.MM: "MM",
    EdgeClass.MP: "MP",
    EdgeClass.PP: "PP",
    EdgeClass.B: "B",
    EdgeClass.O: "O",
}


def _load(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _clusters_json(clustering):
    return [sorted(c) for c in clustering.clusters()]


def _report_json(report):
    return {
        "clusters": _clusters_json(report.clustering),
        "cost": report.cost,
        "forced_mistakes": report.forced_mistakes,
        "feasible": True,
        "cost_original": report.cost_original,
        "lp_objective": report.lp_objective,
        "certified_ratio": report.certified_ratio,
        "variant": report.variant,
        "epsilon": report.epsilon,
        "pivot": report.pivot_strategy,
        "seed": report.seed,
        "timings": report.timings,
    }


def _write_trace(path: str, trace) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for pivot, members, num, den in trace:
            fh.write(
                json.dumps(
                    {"pivot": pivot, "members": list(members), "num": num, "den": den}
                )
            )
            fh.write("\n")


def _cmd_solve(args) -> int:
    inst = _load(args.file)
    if args.trials is not None:
        if args.pivot != "random":
            raise ValueError("--trials requires --pivot random")
        costs, _, forced = run_random_trials(
            inst, args.variant, args.epsilon, args.seed, args.trials
        )
        stats = {
            "trials": args.trials,
            "seed": args.seed,
            "variant": args.variant,
            "forced_mistakes": forced,
            "cost_mean": float(np.mean(costs)),
            "cost_min": int(np.min(costs)),
            "cost_max": int(np.max(costs)),
            "feasible": True,
        }
        if args.json:
            print(json.dumps(stats))
        else:
            for key, val in stats.items():
                print(key, val)
        return 0

    if args.variant == "auto":
        report = solve_auto(inst, args.epsilon, args.pivot, args.seed)
    elif args.variant == "constrained":
        report = solve_constrained(inst, args.epsilon, args.pivot, args.seed)
    elif args.variant == "friendly":
        report = solve_friendly(inst, args.epsilon, args.pivot, args.seed)
    else:
        report = solve_hostile(inst, args.pivot, args.seed, args.epsilon)
    if args.trace:
        _write_trace(args.trace, report.trace)
    if args.json:
        print(json.dumps(_report_json(report)))
    else:
        print("variant", report.variant)
        print("pivot", report.pivot_strategy)
        print("cost", report.cost)
        print("cost_original", report.cost_original)
        print("forced_mistakes", report.forced_mistakes)
        if report.lp_objective is not None:
            print("lp_objective %.10g" % report.lp_objective)
            print("certified_ratio %.10g" % report.certified_ratio)
        for c in _clusters_json(report.clustering):
            print("cluster", *c)
    return 0


def _cmd_exact(args) -> int:
    inst = _load(args.file)
    _, forced = to_consistent_form(inst)
    result = exact_opt(inst)
    payload = {
        "clusters": _clusters_json(result.opt_clustering),
        "cost": result.opt_cost,
        "forced_mistakes": forced,
        "feasible": True,
        "num_feasible": result.num_feasible,
    }
    if args.json:
        print(json.dumps(payload))
    else:
        print("cost", result.opt_cost)
        print("forced_mistakes", forced)
        print("num_feasible", result.num_feasible)
        for c in payload["clusters"]:
            print("cluster", *c)
    return 0


def _cmd_gen(args) -> int:
    spec = GenSpec(
        n=args.n, k=args.k, p_noise=args.noise, f=args.friendly,
        h=args.hostile, seed=args.seed,
    )
    if args.infeasible:
        inst = generate_infeasible(spec)
    elif args.inconsistent > 0:
        inst = generate_inconsistent(spec, args.inconsistent, args.inconsistent)
    else:
        inst = generate(spec)
    text = format_instance(inst)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _build_lp(inst, variant):
    inst_c, _ = to_consistent_form(inst)
    sn = compute_supernodes(inst_c)
    if variant == "constrained":
        dp = compute_dangerous_pairs(inst_c, sn)
        heaps = find_heaps(inst_c, sn, dp)
        return inst_c, sn, dp, build_constrained_lp(inst_c, sn, dp, heaps)
    if variant == "friendly":
        return inst_c, sn, None, build_friendly_lp(inst_c, sn)
    dp = compute_dangerous_pairs(inst_c, sn)
    return inst_c, sn, dp, build_hostile_lp(inst_c)


def _cmd_lp(args) -> int:
    inst = _load(args.file)
    _, _, _, prog = _build_lp(inst, args.variant)
    sol = solve_covering(prog, args.epsilon / 3.0)
    print("variant", args.variant)
    print("variables", prog.var_count)
    print("rows", prog.row_count)
    print("objective %.10g" % sol.objective_value)
    print("increments", sol.increments)
    if args.dump:
        for name, val in sorted(prog.fixed.items()):
            print("fixed", name, val)
        for i, name in enumerate(prog.var_names):
            print("var", name, "%.12g" % sol.values[i])
    return 0


def _cmd_dump_dangerous(args) -> int:
    inst = _load(args.file)
    inst_c, _ = to_consistent_form(inst)
    sn = compute_supernodes(inst_c)
    dp = compute_dangerous_pairs(inst_c, sn)
    for idx, members in enumerate(sn.members):
        print("supernode", idx, *members)
    for a, b in sorted(sn.hostile_superedges):
        print("hostile-superedge", a, b)
    for (a, b), (c, d) in dp.pairs:
        print("pair (%d,%d) (%d,%d)" % (a, b, c, d))
    print("extracted", len(dp.e_d))
    return 0


def _cmd_dump_heaps(args) -> int:
    inst = _load(args.file)
    inst_c, _ = to_consistent_form(inst)
    sn = compute_supernodes(inst_c)
    dp = compute_dangerous_pairs(inst_c, sn)
    heaps = find_heaps(inst_c, sn, dp)
    for triple in sorted(heaps.triples):
        print("heap", *["(%d,%d)" % e for e in triple])
    print("count", len(heaps))
    return 0


def _cmd_dump_aux(args) -> int:
    inst = _load(args.file)
    inst_c, _ = to_consistent_form(inst)
    sn = compute_supernodes(inst_c)
    if args.variant == "constrained":
        dp = compute_dangerous_pairs(inst_c, sn)
        heaps = find_heaps(inst_c, sn, dp)
        prog = build_constrained_lp(inst_c, sn, dp, heaps)
        sol = solve_covering(prog, args.epsilon / 3.0)
        g = build_aux_constrained(inst_c, sn, dp, sol)
    elif args.variant == "friendly":
        prog = build_friendly_lp(inst_c, sn)
        sol = solve_covering(prog, args.epsilon / 3.0)
        g = build_aux_friendly(inst_c, sn, sol)
    else:
        dp = compute_dangerous_pairs(inst_c, sn)
        g = build_aux_hostile(inst_c, dp)
    print("nodes", g.n)
    for u in range(g.n):
        for v in range(u + 1, g.n):
            sign = "+" if g.sign_hat[u, v] > 0 else "-"
            print(u, v, sign, _CLASS_NAMES[EdgeClass(g.edge_class[u, v])])
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ccc",
        description="Correlation clustering with friendly and hostile constraints",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run the approximation pipeline")
    p_solve.add_argument("file")
    p_solve.add_argument(
        "--variant",
        choices=["auto", "constrained", "friendly", "hostile"],
        default="auto",
    )
    p_solve.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_solve.add_argument(
        "--pivot", choices=["random", "deterministic"], default="deterministic"
    )
    p_solve.add_argument("--seed", type=int, default=0)
    p_solve.add_argument("--trials", type=int, default=None)
    p_solve.add_argument("--trace", default=None, metavar="PATH")
    p_solve.add_argument("--json", action="store_true")
    p_solve.set_defaults(func=_cmd_solve)

    p_exact = sub.add_parser("exact", help="brute-force optimum (small instances)")
    p_exact.add_argument("file")
    p_exact.add_argument("--json", action="store_true")
    p_exact.set_defaults(func=_cmd_exact)

    p_gen = sub.add_parser("gen", help="generate a planted-partition instance")
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--k", type=int, required=True)
    p_gen.add_argument("--noise", type=float, default=0.0)
    p_gen.add_argument("--friendly", type=float, default=0.0)
    p_gen.add_argument("--hostile", type=float, default=0.0)
    p_gen.add_argument("--seed", type=int, default=0)
    p_gen.add_argument("-o", "--output", default=None)
    p_gen.add_argument("--infeasible", action="store_true")
    p_gen.add_argument("--inconsistent", type=int, default=0, metavar="FLIPS")
    p_gen.set_defaults(func=_cmd_gen)

    p_lp = sub.add_parser("lp", help="build and solve the covering LP")
    p_lp.add_argument("file")
    p_lp.add_argument(
        "--variant",
        choices=["constrained", "friendly", "hostile"],
        default="constrained",
    )
    p_lp.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_lp.add_argument("--dump", action="store_true")
    p_lp.set_defaults(func=_cmd_lp)

    p_dd = sub.add_parser("dump-dangerous", help="show the extracted pair structure")
    p_dd.add_argument("file")
    p_dd.set_defaults(func=_cmd_dump_dangerous)

    p_dh = sub.add_parser("dump-heaps", help="show extra covering constraints")
    p_dh.add_argument("file")
    p_dh.set_defaults(func=_cmd_dump_heaps)

    p_da = sub.add_parser("dump-aux", help="show the auxiliary graph")
    p_da.add_argument("file")
    p_da.add_argument(
        "--variant",
        choices=["constrained", "friendly", "hostile"],
        default="constrained",
    )
    p_da.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    p_da.set_defaults(func=_cmd_dump_aux)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (
        InstanceFormatError,
        InfeasibleInstance,
        TooLarge,
        SolverError,
        CertificateError,
        ValueError,
        OSError,
    ) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
