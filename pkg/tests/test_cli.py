from __future__ import annotations

import csv
import json
import subprocess
import sys

import pytest

from sjc.cli import resolve_threads, run


def _run(capsys, *argv):
    code = run(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_params_ti(capsys):
    code, out, _ = _run(capsys, "params", "--family", "ti", "--n", "2", "--d", "1", "--eps", "+", "--delta", "1")
    data = json.loads(out)
    assert code == 0
    assert (data["k"], data["code_size"], data["valid"]) == (4, 15, True)
    assert data["self_complementary"] is False


def test_params_self_complementary(capsys):
    code, out, _ = _run(capsys, "params", "--family", "nd", "--n", "4", "--d", "2", "--eps", "-", "--epsprime", "+")
    assert code == 0 and json.loads(out)["self_complementary"] is True


def test_excluded_case_exits_2(capsys):
    code, out, err = _run(capsys, "params", "--family", "nd", "--n", "2", "--d", "1", "--eps", "+")
    assert code == 2 and out == ""
    assert "(2,1,+)" in err


def test_forced_excluded_case_is_flagged(capsys):
    code, out, _ = _run(capsys, "params", "--family", "ti", "--n", "2", "--d", "2", "--eps", "-", "--delta", "0", "--force")
    data = json.loads(out)
    assert code == 0 and data["valid"] is False and data["conforming"] is False


@pytest.mark.parametrize("argv", [
    ["params", "--family", "ti", "--n", "2", "--d", "1", "--eps", "+"],
    ["params", "--family", "ti", "--n", "2", "--d", "1", "--eps", "+", "--delta", "1", "--epsprime", "+"],
    ["params", "--family", "ti", "--n", "9", "--d", "1", "--eps", "+", "--delta", "1"],
    ["params", "--family", "nd", "--n", "3", "--d", "1", "--eps", "x", "--epsprime", "+"],
    ["frobnicate"],
    ["orbits", "--case", "c2", "--eps", "+"],
    ["--threads", "0", "table", "--nmax", "2"],
    ["table", "--nmax", "1"],
])
def test_usage_errors_exit_2(capsys, argv):
    assert _run(capsys, *argv)[0] == 2


def test_mindist(capsys):
    code, out, _ = _run(capsys, "mindist", "--family", "ti", "--n", "3", "--d", "1", "--eps", "+", "--delta", "0")
    assert code == 0 and json.loads(out)["min_distance"] == 8


def test_scale_guard_exit_3(capsys):
    assert _run(capsys, "mindist", "--family", "ti", "--n", "5", "--d", "1", "--eps", "+", "--delta", "0")[0] == 3
    assert _run(capsys, "verify-sit", "--family", "ti", "--n", "4", "--d", "1", "--eps", "+", "--delta", "0")[0] == 3


def test_verify_sit(capsys):
    code, out, _ = _run(capsys, "verify-sit", "--family", "nd", "--n", "3", "--d", "1", "--eps", "-", "--epsprime", "+")
    assert code == 0 and json.loads(out)["status"] == "pass"


@pytest.mark.parametrize("argv,sizes", [
    (["--case", "c2", "--n", "2", "--t", "2", "--eps", "+"], [9, 0, 1]),
    (["--case", "c3", "--m", "2", "--b", "2", "--eps", "-"], [1, 51, 68]),
    (["--case", "c8", "--n", "3", "--eps", "+"], [1, 15, 20]),
])
def test_orbits(capsys, argv, sizes):
    code, out, _ = _run(capsys, "orbits", *argv)
    data = json.loads(out)
    assert code == 0 and data["certified"]
    assert [p["size"] for p in data["parts"]] == sizes


def test_build_writes_file(capsys, tmp_path):
    target = tmp_path / "code.json"
    code, out, _ = _run(capsys, "build", "--family", "ti", "--n", "2", "--d", "1", "--eps", "+", "--delta", "1",
                        "--out", str(target))
    assert code == 0
    assert json.loads(out)["codewords"] == 15
    assert len(json.loads(target.read_text())["codewords"]) == 15


def test_table_csv(capsys, tmp_path):
    target = tmp_path / "t.csv"
    code, out, _ = _run(capsys, "table", "--nmax", "3", "--csv", str(target))
    assert code == 0
    rows = list(csv.DictReader(target.open()))
    assert rows and all(r["agrees"] == "True" for r in rows)
    assert all(r["min_distance"] == r["conjecture_expected"] for r in rows)


def test_output_is_deterministic_across_threads(capsys):
    outs = set()
    for t in ("1", "2", "5"):
        code, out, _ = _run(capsys, "--threads", t, "table", "--nmax", "3")
        outs.add(out)
    assert len(outs) == 1


def test_threads_env(monkeypatch):
    monkeypatch.setenv("SJC_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    monkeypatch.delenv("SJC_THREADS")
    assert resolve_threads(None) >= 1


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "sjc.cli", "params", "--family", "ti", "--n", "2", "--d", "2", "--eps", "+", "--delta", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["code_size"] == 15
