import json
import subprocess
import sys

import pytest

from binate.cli import main

KEYS = {"schema_version", "tool_version", "verb", "inputs", "results", "verdicts", "seed"}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    report = json.loads(out) if out.strip() else None
    return code, report, err


def test_homology_fixture(capsys):
    code, r, _ = run_json(capsys, "homology", "--fixture", "higman:4")
    assert code == 0
    assert set(r) == KEYS
    assert r["results"]["h1_text"] == "0"
    assert r["results"]["h2_complex"] == 0
    assert r["results"]["deficiency"] == 0
    assert r["verdicts"] == {"snf_verified": "pass"}


def test_check_homology(capsys):
    code, r, _ = run_json(capsys, "check", "homology", "--fixture", "epstein")
    assert code == 0 and r["results"]["h1_text"] == "Z"


def test_homology_from_file(tmp_path, capsys):
    f = tmp_path / "p.txt"
    f.write_text("gens: a b;\nrels: a^2, b^3, (a b)^5;\n", encoding="utf-8")
    code, r, _ = run_json(capsys, "homology", str(f))
    assert code == 0
    assert r["results"]["h1_text"] == "0"
    assert r["inputs"] == {"file": str(f)}


def test_parse_error_exit_code(capsys):
    code, out, err = run(capsys, "homology", "gens: x y;\nrels: x = [x, y;")
    assert code == 2
    assert "line 2, column 16" in err
    assert out == ""


def test_tower(capsys):
    code, r, _ = run_json(capsys, "tower", "--base", "(1 2)", "--depth", "2", "--check", "binate,pairwise")
    assert code == 0
    assert r["results"]["scope"] == "level-n facts"
    assert set(r["verdicts"].values()) == {"pass"}


def test_tower_witness_on_s3(capsys):
    code, r, _ = run_json(capsys, "tower", "--base", "S3", "--depth", "2", "--check", "witness",
                          "--x", "(1 2 3)", "--bound", "3")
    assert code == 0 and set(r["verdicts"].values()) == {"pass"}


def test_tower_depth_zero_is_usage_error(capsys):
    code, _, err = run(capsys, "tower", "--base", "(1 2)", "--depth", "0")
    assert code == 2 and "depth" in err


def test_tower_capped(capsys):
    code, r, err = run_json(capsys, "tower", "--base", "(1 2)", "--depth", "5")
    assert code == 0
    assert r["verdicts"] == {"tower": "capped"}
    assert "warning" in err


def test_a1(capsys):
    code, r, _ = run_json(capsys, "a1", "--group", "(1 2),(1 2 3)")
    assert code == 0
    assert r["results"]["abelian_subgroups"] == len(r["results"]["edges"])
    assert set(r["verdicts"].values()) == {"pass"}


def test_a1_higher_level_unsupported(capsys):
    code, r, err = run_json(capsys, "a1", "--group", "S3", "--n", "2")
    assert code == 0 and r["verdicts"] == {"construction": "unsupported"}
    assert "warning" in err


def test_trace_element(capsys):
    code, r, _ = run_json(capsys, "trace", "--ring", "z2", "--element", "1/2*e + 1/2*g")
    assert code == 0
    assert r["results"]["hs_trace"] == {"[e]": "1/2", "[g]": "1/2"}
    assert r["results"]["kaplansky"] == "1/2"
    assert r["results"]["lambda_member"] is True


def test_trace_matrix_not_idempotent(capsys):
    code, r, _ = run_json(capsys, "trace", "--ring", "f2", "--matrix", '[["x"]]')
    assert code == 1
    assert r["verdicts"]["idempotent"] == "fail"
    assert r["results"]["witness"]["row"] == 0


def test_trace_bass(capsys):
    code, r, _ = run_json(capsys, "trace", "--ring", "f2", "--matrix", '[["1","x"],["0","0"]]', "--bass")
    assert code == 0
    assert r["verdicts"] == {"idempotent": "pass", "bass_consistent": "pass"}
    code, r, _ = run_json(capsys, "trace", "--bass-search")
    assert r["results"]["bass_search"]["status"] == "consistent"


def test_grope(capsys):
    code, r, _ = run_json(capsys, "grope", "--levels", "6", "--sequence", "2,1,3")
    assert code == 0 and set(r["verdicts"].values()) == {"pass"}
    code, r, _ = run_json(capsys, "grope", "--certificate", "--group", "S3", "--element", "(1 2)", "--depth", "1")
    assert code == 1 and r["verdicts"] == {"certificate_exists": "fail"}


def test_suite_seeded_and_reproducible(capsys):
    argv = ("check", "suite", "commutator-identity", "--samples", "200", "--seed", "7", "--json")
    code1, out1, _ = run(capsys, *argv)
    code2, out2, _ = run(capsys, *argv)
    assert code1 == code2 == 0
    assert out1 == out2
    r = json.loads(out1)
    assert r["seed"] == 7 and "timing_s" not in r


def test_timing_only_on_request(capsys):
    _, r, _ = run_json(capsys, "homology", "--fixture", "epstein", "--timing")
    assert "timing_s" in r


def test_unknown_suite(capsys):
    code, _, err = run(capsys, "check", "suite", "nope")
    assert code == 2 and "unknown suite" in err


def test_failing_suite_exit_code(capsys):
    code, r, _ = run_json(capsys, "check", "suite", "lemma-structure-maps")
    assert code == 1
    assert "fail" in r["verdicts"].values()


def test_console_script():
    proc = subprocess.run([sys.executable, "-m", "binate.cli", "homology", "--fixture", "higman:2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "[pass] snf_verified" in proc.stdout


def test_argparse_usage_error():
    with pytest.raises(SystemExit) as info:
        main(["frobnicate"])
    assert info.value.code == 2
