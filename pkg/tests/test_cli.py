"""Command-line interface: subcommands, JSON output, and error exits."""

import json
import os
import shutil
import subprocess

import pytest

from ccc.cli import main
from ccc.instance import format_instance, make_instance, parse_instance


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def write_instance(tmp_path, inst, name="inst.ccc"):
    path = os.path.join(tmp_path, name)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_instance(inst))
    return path


def dangerous_triangle_path(tmp_path):
    inst = make_instance(3, positives=[(0, 1), (1, 2)], hostile=[(0, 2)])
    return write_instance(tmp_path, inst)


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------


def test_solve_json_schema(capsys, sample8_path):
    code, out, err = run(capsys, "solve", sample8_path, "--json")
    assert code == 0 and err == ""
    payload = json.loads(out)
    for key in (
        "clusters", "cost", "forced_mistakes", "feasible", "cost_original",
        "lp_objective", "certified_ratio", "variant", "epsilon", "pivot",
        "seed", "timings",
    ):
        assert key in payload
    assert payload["feasible"] is True
    assert payload["variant"] == "constrained"
    assert payload["pivot"] == "deterministic"
    assert sorted(u for c in payload["clusters"] for u in c) == list(range(8))
    assert payload["cost_original"] == payload["cost"] + payload["forced_mistakes"]
    assert payload["certified_ratio"] <= 3.0


def test_solve_text_output(capsys, sample8_path):
    code, out, err = run(capsys, "solve", sample8_path)
    assert code == 0
    lines = out.splitlines()
    assert any(line.startswith("cost ") for line in lines)
    assert any(line.startswith("cluster ") for line in lines)
    assert any(line.startswith("lp_objective ") for line in lines)


def test_solve_variant_and_seed_flags(capsys, tmp_path):
    path = dangerous_triangle_path(tmp_path)
    code, out, err = run(
        capsys, "solve", path, "--variant", "hostile", "--pivot", "random",
        "--seed", "3", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["variant"] == "hostile"
    assert payload["seed"] == 3
    assert payload["lp_objective"] is None


def test_solve_trace_file(capsys, tmp_path, sample8_path):
    trace_path = os.path.join(tmp_path, "trace.jsonl")
    code, out, err = run(
        capsys, "solve", sample8_path, "--trace", trace_path, "--json"
    )
    assert code == 0
    with open(trace_path, "r", encoding="utf-8") as fh:
        records = [json.loads(line) for line in fh]
    assert records
    seen = []
    for rec in records:
        assert rec["pivot"] in rec["members"]
        assert rec["num"] is not None and rec["den"] is not None
        seen.extend(rec["members"])
    assert sorted(seen) == list(range(8))


def test_solve_trials_stats(capsys, tmp_path):
    path = dangerous_triangle_path(tmp_path)
    code, out, err = run(
        capsys, "solve", path, "--pivot", "random", "--trials", "64", "--json"
    )
    assert code == 0
    stats = json.loads(out)
    assert stats["trials"] == 64
    assert stats["feasible"] is True
    assert 1 <= stats["cost_min"] <= stats["cost_mean"] <= stats["cost_max"] <= 2


def test_solve_trials_requires_random(capsys, sample8_path):
    code, out, err = run(capsys, "solve", sample8_path, "--trials", "5")
    assert code == 1
    assert "error:" in err and "--pivot random" in err


# ---------------------------------------------------------------------------
# exact
# ---------------------------------------------------------------------------


def test_exact_json(capsys, tmp_path):
    path = dangerous_triangle_path(tmp_path)
    code, out, err = run(capsys, "exact", path, "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload == {
        "clusters": payload["clusters"],
        "cost": 1,
        "forced_mistakes": 0,
        "feasible": True,
        "num_feasible": 3,
    }
    assert sorted(u for c in payload["clusters"] for u in c) == [0, 1, 2]


def test_exact_bounds_solve(capsys, sample8_path):
    code, solve_out, _ = run(capsys, "solve", sample8_path, "--json")
    assert code == 0
    code, exact_out, _ = run(capsys, "exact", sample8_path, "--json")
    assert code == 0
    cost = json.loads(solve_out)["cost"]
    opt = json.loads(exact_out)["cost"]
    assert opt <= cost <= 3.3 * opt + 1e-9


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def test_gen_round_trip(capsys, tmp_path):
    path = os.path.join(tmp_path, "gen.ccc")
    code, out, err = run(
        capsys, "gen", "--n", "9", "--k", "3", "--noise", "0.3",
        "--friendly", "0.2", "--hostile", "0.1", "--seed", "4", "-o", path,
    )
    assert code == 0
    with open(path, "r", encoding="utf-8") as fh:
        inst = parse_instance(fh.read())
    assert inst.n == 9

    code, solve_out, _ = run(capsys, "solve", path, "--json")
    assert code == 0
    code, exact_out, _ = run(capsys, "exact", path, "--json")
    assert code == 0
    solve_payload = json.loads(solve_out)
    exact_payload = json.loads(exact_out)
    # noise may flip friendly-pair signs, so forced mistakes are possible,
    # but both commands must agree on them and on the cost ordering
    assert solve_payload["forced_mistakes"] == exact_payload["forced_mistakes"]
    assert exact_payload["cost"] <= solve_payload["cost"]
    assert solve_payload["cost"] <= 3.3 * exact_payload["cost"] + 1e-9


def test_gen_stdout_parses(capsys):
    code, out, err = run(capsys, "gen", "--n", "5", "--k", "2", "--seed", "1")
    assert code == 0
    assert parse_instance(out).n == 5


def test_gen_inconsistent_has_forced_mistakes(capsys, tmp_path):
    path = os.path.join(tmp_path, "inc.ccc")
    code, _, _ = run(
        capsys, "gen", "--n", "9", "--k", "3", "--friendly", "0.3",
        "--hostile", "0.2", "--seed", "2", "--inconsistent", "2", "-o", path,
    )
    assert code == 0
    code, out, _ = run(capsys, "exact", path, "--json")
    assert code == 0
    assert json.loads(out)["forced_mistakes"] >= 4


def test_gen_infeasible_then_solve_fails(capsys, tmp_path):
    path = os.path.join(tmp_path, "bad.ccc")
    code, _, _ = run(
        capsys, "gen", "--n", "6", "--k", "2", "--seed", "0",
        "--infeasible", "-o", path,
    )
    assert code == 0
    code, out, err = run(capsys, "solve", path)
    assert code == 1
    assert err.startswith("error:")


def test_gen_validation_error(capsys):
    code, out, err = run(capsys, "gen", "--n", "3", "--k", "9")
    assert code == 1
    assert "error:" in err


# ---------------------------------------------------------------------------
# lp and dumps
# ---------------------------------------------------------------------------


def test_lp_summary_and_dump(capsys, sample8_path):
    code, out, err = run(capsys, "lp", sample8_path, "--dump")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "variant constrained"
    assert lines[1] == "variables 10"
    assert any(line.startswith("objective ") for line in lines)
    fixed = [line for line in lines if line.startswith("fixed ")]
    assert "fixed X+(0,1) 1" in out and "fixed X-(0,1) 0" in out
    var_lines = [line for line in lines if line.startswith("var ")]
    assert len(var_lines) == 10


def test_dump_dangerous(capsys, sample8_path):
    code, out, err = run(capsys, "dump-dangerous", sample8_path)
    assert code == 0
    lines = out.splitlines()
    assert "supernode 0 0 1" in lines
    assert "supernode 2 4 5 6" in lines
    assert "hostile-superedge 0 1" in lines
    assert sum(1 for line in lines if line.startswith("pair ")) == 3
    assert lines[-1] == "extracted 6"


def test_dump_heaps(capsys, tmp_path):
    inst = make_instance(
        4, positives=[(0, 1), (0, 2), (1, 2), (2, 3)], hostile=[(0, 3)]
    )
    path = write_instance(tmp_path, inst)
    code, out, err = run(capsys, "dump-heaps", path)
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "count 1"
    assert lines[0] == "heap (0,1) (1,2) (2,3)"


def test_dump_aux_hostile(capsys, tmp_path):
    path = dangerous_triangle_path(tmp_path)
    code, out, err = run(capsys, "dump-aux", path, "--variant", "hostile")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "nodes 3"
    assert "0 1 - B" in lines
    assert "1 2 - B" in lines
    assert "0 2 - MM" in lines


def test_dump_aux_constrained(capsys, sample8_path):
    code, out, err = run(capsys, "dump-aux", sample8_path)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "nodes 8"
    assert len(lines) == 1 + 8 * 7 // 2
    # intra-supernode pairs are always positive
    assert "0 1 + PP" in lines and "2 3 + PP" in lines
    # hostile pairs are always negative
    for pair in ("0 2", "0 3", "1 2", "1 3"):
        assert any(line.startswith(pair + " -") for line in lines)


# ---------------------------------------------------------------------------
# error handling
# ---------------------------------------------------------------------------


def test_missing_file(capsys):
    code, out, err = run(capsys, "solve", "/no/such/file.ccc")
    assert code == 1
    assert err.startswith("error:")


def test_malformed_instance(capsys, tmp_path):
    path = os.path.join(tmp_path, "bad.ccc")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("ccc v2\nnodes 3\n")
    code, out, err = run(capsys, "solve", path)
    assert code == 1
    assert err.startswith("error:")


def test_bad_epsilon(capsys, sample8_path):
    code, out, err = run(capsys, "solve", sample8_path, "--epsilon", "7")
    assert code == 1
    assert "error:" in err


def test_exact_too_large(capsys, tmp_path):
    inst = make_instance(13, positives=[(0, 1)])
    path = write_instance(tmp_path, inst)
    code, out, err = run(capsys, "exact", path)
    assert code == 1
    assert "error:" in err and "guard" in err


def test_installed_entry_point(sample8_path):
    exe = shutil.which("ccc")
    if exe is None:
        pytest.skip("console script not installed")
    proc = subprocess.run(
        [exe, "solve", sample8_path, "--json"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(proc.stdout)["feasible"] is True
