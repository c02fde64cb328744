from __future__ import annotations

import json
import subprocess
import sys

import pytest

from trinomial_ratios import __version__
from trinomial_ratios.cli import main
from trinomial_ratios.experiments import read_ratio_csv

TABLE_ARGS = ["--A", "[[0,3],[1,0],[0,0],[0,1]]", "--B", "[[7,0],[0,-2],[1,0]]", "--k", "5", "--l", "3"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sequence_json(capsys):
    code, out, _ = run(capsys, "sequence", *TABLE_ARGS, "--n", "6")
    assert code == 0
    doc = json.loads(out)
    assert doc["version"] == __version__ and doc["config"]["n"] == 6
    seq = doc["sequence"]
    assert seq[0] == [[1.0, 0.0]]
    # P_6 = B^2 = z^4 - 4i z^3 + 10 z^2 - 28i z + 49
    assert seq[6] == [[49.0, 0.0], [0.0, -28.0], [10.0, 0.0], [0.0, -4.0], [1.0, 0.0]]


def test_sequence_n0_and_csv(capsys):
    code, out, _ = run(capsys, "sequence", *TABLE_ARGS, "--n", "0", "--format", "csv")
    assert code == 0
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines == ["n,i,re,im", "0,0,1,0"]
    assert out.startswith(f"# trinomial-ratios {__version__}\n# config ")


def test_non_coprime_rejected(capsys):
    code, _, err = run(capsys, "sequence", "--A", "[[1,0],[1,0]]", "--B", "[[1,0]]", "--k", "4", "--l", "2", "--n", "3")
    assert code == 2 and "k and l must be coprime" in err


@pytest.mark.parametrize("bad", ["[[1,0]", "[[1]]", "nope"])
def test_malformed_polynomial(capsys, bad):
    code, _, err = run(capsys, "verify", "--A", bad, "--B", "[[1,0]]", "--k", "3", "--l", "1", "--n", "3")
    assert code == 2 and "--A" in err


def test_missing_arguments(capsys):
    code, _, err = run(capsys, "verify", "--n", "3")
    assert code == 2 and "missing" in err


def test_argparse_errors_exit_2(capsys):
    assert run(capsys, "sequence", "--n", "x")[0] == 2
    assert run(capsys)[0] == 2


def test_verify_table_spec(capsys, tmp_path):
    out = tmp_path / "report.json"
    code, _, err = run(capsys, "verify", *TABLE_ARGS, "--n-list", "17,23,56", "--out", str(out))
    assert code == 0 and "verified" in err
    doc = json.loads(out.read_text())
    assert doc["passed"] and doc["kind"] == "verify"
    assert doc["config"]["n_values"] == [17, 23, 56]


def test_verify_failure_exit_1(capsys):
    # at a classification tolerance below rounding no zeros count as equimodular
    code, _, err = run(capsys, "verify", *TABLE_ARGS, "--n", "23", "--tol", "1e-300")
    assert code == 1
    assert "FAIL" in err and "n=23" in err


def test_verify_fuzz_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (a, b):
        code, _, _ = run(capsys, "verify", "--fuzz", "5", "--seed", "7", "--format", "csv", "--out", str(path))
        assert code == 0
    assert a.read_bytes() == b.read_bytes()
    rows = read_ratio_csv(a.read_text())
    assert rows and "trial" in rows[0]


def test_table1_default(capsys):
    code, out, _ = run(capsys, "table1")
    assert code == 0
    doc = json.loads(out)
    rows = doc["extra"]["table1"]["rows"]
    assert [r["ratio_count"] for r in rows] == [20, 20, 20, 20]
    assert [r["distinct_ratio_count"] for r in rows] == [4, 20, 20, 20]


def test_table1_csv(capsys):
    code, out, _ = run(capsys, "table1", "--format", "csv")
    assert code == 0
    assert len(read_ratio_csv(out)) == 80


def test_table1_tight_tolerance_fails(capsys):
    code, _, err = run(capsys, "table1", "--tol", "1e-9")
    assert code == 1 and "|diff|" in err


def test_plotdata_g(capsys):
    code, out, _ = run(capsys, "plotdata", "g", "--k", "5", "--l", "3", "--num", "21")
    assert code == 0
    prof = json.loads(out)["g_profile"]
    assert prof["reference"] == pytest.approx(3125 / 108)
    assert 0.0 in prof["excluded"]


def test_plotdata_g_needs_kl(capsys):
    assert run(capsys, "plotdata", "g", "--k", "5")[0] == 2


def test_plotdata_alphastar(capsys):
    code, out, _ = run(
        capsys, "plotdata", "alphastar", "--k", "3", "--l", "1", "--A", "[[0,0],[2,0]]", "--B", "[[0,0],[3,0]]",
        "--n-max", "16", "--step", "5", "--format", "csv",
    )
    assert code == 0
    rows = read_ratio_csv(out)
    assert [r["n"] for r in rows] == ["1", "6", "11", "16"]
    assert rows[0]["alpha_star"] == ""


def test_plotdata_ratios_default_spec(capsys):
    code, out, _ = run(capsys, "plotdata", "ratios", "--n", "23")
    assert code == 0
    pts = json.loads(out)["points"]
    assert any(p["label"] == "z_{23,0}" for p in pts)
    assert {p["series"] for p in pts} == {"zero", "ratio"}


def test_io_error_exit_3(capsys, tmp_path):
    code, _, err = run(capsys, "sequence", *TABLE_ARGS, "--n", "2", "--out", str(tmp_path / "missing" / "x.json"))
    assert code == 3 and "I/O" in err


def test_identical_invocations_identical_output(capsys):
    a = run(capsys, "verify", *TABLE_ARGS, "--n", "17")[1]
    b = run(capsys, "verify", *TABLE_ARGS, "--n", "17")[1]
    assert a == b


def test_console_script_module_entry():
    proc = subprocess.run(
        [sys.executable, "-m", "trinomial_ratios.cli", "--version"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and __version__ in proc.stdout
