import json
import subprocess
import sys

import pytest

from affind.cli import emit, main, run


def _machine(argv):
    record, _ = run(argv)
    return emit(record, "machine")


def test_table_g2(capsys):
    assert main(["table", "--type", "G2~1"]) == 0
    out = capsys.readouterr().out
    assert "A1~1" in out
    data = json.loads(_machine(["table", "--type", "G2~1"]))
    assert data["output"]["labels"] == ["A1~1"]
    assert {tuple(r["levi"]) for r in data["output"]["rows"]} == {("A1~1",)}


def test_table_record_per_row():
    data = json.loads(_machine(["table", "--type", "C3~1"]))
    rows = data["output"]["rows"]
    assert all(set(r) == {"type", "alpha0", "S", "levi"} for r in rows)
    # five connected proper subsets for each of the two admissible affine nodes
    assert len(rows) == 10 and {r["alpha0"] for r in rows} == {0, 3}


def test_classify(capsys):
    assert main(["classify", "--type", "A2~1", "--flag", "m2-m0"]) == 0
    assert capsys.readouterr().out.strip() == "TypeII"
    data = json.loads(_machine(["classify", "--type", "A2~1", "--flag", "m2-m0; m1"]))
    assert data["output"]["kind"] == "TypeIb" and data["output"]["s_index"] == 1


def test_verify_jacobi(capsys):
    assert main(["verify", "--jacobi", "--type", "A2~1", "--bound", "2"]) == 0
    assert "0 violations" in capsys.readouterr().out


def test_parse_error_position(capsys):
    assert main(["classify", "--type", "A2~1", "--flag", "m2-q0"]) == 1
    assert "position 2" in capsys.readouterr().err


def test_capability_error_verbatim(capsys):
    assert main(["verify", "--type", "E6~1", "--bound", "1"]) == 1
    assert "types A-D" in capsys.readouterr().err


def test_flag_and_S_rejected(capsys):
    assert main(["classify", "--type", "A2~1", "--flag", "m0", "--S", "1"]) == 1


def test_levi_command():
    data = json.loads(_machine(["levi", "--type", "A3~1", "--S", "1,3"]))
    assert [c["label"] for c in data["output"]["components"]] == ["A1~1", "A1~1"]
    assert data["output"]["heisenberg_complement_rank"] == [1, 1, 1]


def test_primitives_and_character(tmp_path):
    cfg = tmp_path / "plan.json"
    cfg.write_text(json.dumps({"type": "A2~1", "S": [1], "bounds": {"window": 2, "depth": 1}}))
    prim = json.loads(_machine(["primitives", "--config", str(cfg)]))
    assert prim["verdicts"] == {"reduction": "PASS"}
    assert all(w["kernel_dim"] == w["baseline_dim"] for w in prim["output"]["report"]["windows"])
    char = json.loads(_machine(["character", "--type", "A2~1", "--S", "1", "--window", "2"]))
    assert char["output"]["mismatches"] == 0


def test_induce_inline_weights():
    data = json.loads(_machine(["induce", "--type", "A2~1", "--S", "1", "--levi", "0", "--complement", "1/2",
                                "--charge", "3", "--window", "1", "--depth", "0"]))
    assert data["input"]["weights"] == [{"charge": "3/1", "complement": ["1/2"], "degree": "0/1",
                                         "levi": ["0/1"]}]
    assert data["output"]["dimension"] == 3


def test_determinism_and_no_floats():
    argv = ["primitives", "--type", "A2~1", "--S", "1", "--window", "2", "--depth", "1"]
    a, b = _machine(argv), _machine(argv)
    assert a == b
    json.loads(a, parse_float=lambda s: pytest.fail(f"float {s} in machine output"))
    assert "elapsed" not in a and '"schema": "affind.run/1"' in a


def test_results_directory(tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["table", "--type", "G2~1", "--format", "machine", "--results", str(out)]) == 0
    files = list(out.iterdir())
    assert len(files) == 1 and files[0].name.startswith("table-")
    assert files[0].read_text() == capsys.readouterr().out


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "affind", "classify", "--type", "A2~1", "--S", "1"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "TypeII"
