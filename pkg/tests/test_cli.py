import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from gibbsfrag.cli import main


def run(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    assert code == 0
    return [json.loads(line) for line in out.splitlines()]


def rationals(obj):
    """Every string value that should parse as a rational."""
    if isinstance(obj, dict):
        for key, val in obj.items():
            if key in ("mass", "prob", "lhs", "rhs") or key == "alpha" and val != "-inf":
                yield val
            else:
                yield from rationals(val)
    elif isinstance(obj, list):
        for x in obj:
            yield from rationals(x)


def test_stirling_table_output(capsys):
    code, out, _ = run(capsys, "stirling", "--alpha", "0", "--n", "4", "--format", "table")
    assert code == 0
    assert out.splitlines()[-1] == "6 11 6 1"
    _, out, _ = run(capsys, "stirling", "--alpha", "-inf", "--n", "4", "--format", "table")
    assert out.splitlines()[-1] == "1 7 6 1"
    (doc,) = run_json(capsys, "stirling", "--n", "1")
    assert doc["rows"] == [["1"]] and doc["schema"] == "gibbsfrag/stirling/v1"


def test_dist_records(capsys):
    (doc,) = run_json(capsys, "dist", "--alpha", "0", "--n", "4", "--k", "2")
    assert {s["state"]: F(s["prob"]) for s in doc["states"]} == {
        "1100": F(6, 11), "1010": F(3, 11), "1001": F(2, 11)}
    (doc,) = run_json(capsys, "dist", "--n", "4", "--k", "3", "--p", "1,1/2,1/3,1/4", "--float")
    assert [s["prob"] for s in doc["states"]] == ["1/2", "1/3", "1/6"]
    assert doc["states"][0]["prob_approx"] == pytest.approx(0.5)


def test_dist_partitions_and_block_count(capsys):
    (doc,) = run_json(capsys, "dist", "--n", "3", "--k", "2", "--kind", "partitions", "--alpha", "-inf")
    assert len(doc["states"]) == 3 and {s["prob"] for s in doc["states"]} == {"1/3"}
    (doc,) = run_json(capsys, "dist", "--n", "4", "--kind", "block-count", "--theta", "1")
    assert sum(F(p["prob"]) for p in doc["probs"]) == 1
    assert run(capsys, "dist", "--n", "4", "--kind", "block-count")[0] == 1


def test_couple_extremes(capsys):
    base = ("couple", "--alpha", "0", "--n", "4", "--k", "2", "--edge", "A:X")
    (hi,) = run_json(capsys, *base, "--extreme", "max")
    (lo,) = run_json(capsys, *base, "--extreme", "min")
    order = [("1100", "1110"), ("1100", "1101"), ("1010", "1110"),
             ("1010", "1011"), ("1001", "1101"), ("1001", "1011")]

    def masses(doc):
        got = {(e["from"], e["to"]): F(e["mass"]) * 66 for e in doc["coupling"]["edges"]}
        return [got[e] for e in order]

    assert masses(hi) == [26, 10, 7, 11, 12, 0]
    assert masses(lo) == [15, 21, 18, 0, 1, 11]
    # the same edge spelled by state names
    (named,) = run_json(capsys, "couple", "--n", "4", "--k", "2", "--edge", "1100:1110", "--extreme", "max")
    assert named["coupling"] == hi["coupling"]


def test_couple_top_layer_and_dot(capsys):
    (doc,) = run_json(capsys, "couple", "--n", "5", "--k", "4")
    edges = doc["coupling"]["edges"]
    assert len(edges) == 4 and all(e["to"] == "11111" for e in edges)
    code, out, _ = run(capsys, "couple", "--n", "4", "--k", "2", "--format", "dot")
    assert code == 0 and out.startswith("digraph") and out.count("->") == 6
    assert run(capsys, "couple", "--n", "4", "--k", "4")[0] == 1
    assert run(capsys, "couple", "--n", "4", "--k", "2", "--extreme", "max")[0] == 1


def test_couple_partitions(capsys):
    (doc,) = run_json(capsys, "couple", "--n", "4", "--k", "2", "--kind", "partitions")
    assert doc["status"] == "feasible"
    total = sum(F(e["mass"]) for e in doc["coupling"]["edges"])
    assert total == 1


def test_sample_modes(capsys):
    docs = run_json(capsys, "sample", "--n", "5", "--mode", "crp", "--samples", "3", "--seed", "7")
    assert [d["index"] for d in docs] == [0, 1, 2]
    assert all(len(d["partitions"]) == 5 for d in docs)
    (tri,) = run_json(capsys, "sample", "--n", "4", "--mode", "recursive", "--seed", "1")
    assert [len(r) for r in tri["rows"]] == [1, 2, 3, 4]
    (rec,) = run_json(capsys, "sample", "--n", "6", "--mode", "records", "--alpha", "-1/2", "--seed", "2")
    assert len(rec["records"]) == 6 and rec["records"][-1] == "111111"
    (ext,) = run_json(capsys, "sample", "--n", "5", "--seed", "3", "--extreme", "min")
    assert len(ext["partitions"]) == 5


def test_sample_rejects_partition_modes_off_zero(capsys):
    code, _, err = run(capsys, "sample", "--n", "5", "--mode", "crp", "--alpha", "-1", "--seed", "1")
    assert code == 1 and "records" in err
    assert run(capsys, "sample", "--n", "5", "--mode", "recursive", "--alpha", "-inf", "--seed", "1")[0] == 1
    assert run(capsys, "sample", "--n", "5")[0] == 1


def test_decimal_alpha_is_exact(capsys):
    (doc,) = run_json(capsys, "stirling", "--alpha", "0.5", "--n", "3")
    assert doc["alpha"] == "1/2"


def test_usage_errors(capsys):
    assert run(capsys, "stirling", "--alpha", "1", "--n", "3")[0] == 1
    assert run(capsys, "stirling", "--n", "0")[0] == 1
    assert run(capsys, "frobnicate")[0] == 1
    assert run(capsys, "verify", "--suite", "nope")[0] == 1


def test_verify_default_passes(capsys):
    docs = run_json(capsys, "verify", "--n", "8", "--trials", "200")
    assert len(docs) == 10 and all(d["passed"] for d in docs)


def test_verify_corrupt_table_fails(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "stirling-recursion", "--corrupt-stirling", "4,2")
    assert code == 2
    doc = json.loads(out)
    assert not doc["passed"] and doc["counterexample"]["n"] in (4, 5)


def test_verify_partitions_unit_weights(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "strassen-partitions", "--w", "ones", "--n", "7")
    assert code == 0
    levels = json.loads(out)["detail"]["levels"]
    assert [lv["k"] for lv in levels] == list(range(1, 7))
    assert all(lv["marginals_verified"] for lv in levels if lv["feasible"])


def test_guard_exit_code(capsys, monkeypatch):
    monkeypatch.setenv("GIBBSFRAG_GUARD", "10")
    assert run(capsys, "verify", "--suite", "strassen-partitions", "--n", "6")[0] == 3
    assert run(capsys, "dist", "--n", "6", "--k", "3", "--kind", "partitions")[0] == 3


def test_output_is_deterministic(capsys, tmp_path):
    argv = ("sample", "--n", "6", "--samples", "4", "--seed", "11")
    first, second = run(capsys, *argv)[1], run(capsys, *argv)[1]
    assert first == second
    out = tmp_path / "s.jsonl"
    assert run(capsys, *argv, "--output", str(out))[0] == 0
    assert out.read_text() == first


def test_rationals_round_trip(capsys):
    docs = run_json(capsys, "couple", "--alpha", "-1/2", "--n", "5", "--k", "2")
    docs += run_json(capsys, "dist", "--alpha", "1/2", "--n", "6", "--k", "3")
    for doc in docs:
        vals = list(rationals(doc))
        assert vals
        for v in vals:
            assert str(F(v)) == v


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "gibbsfrag.cli", "stirling", "--n", "3", "--format", "table"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout == "1\n1 1\n2 3 1\n"
