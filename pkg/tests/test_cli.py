"""The ccx command line: flags, exit codes, output files."""
import csv
import json
import os
import subprocess
import sys

import pytest

from ccx import cli
from ccx.claims import ClaimReport

QUICK = ["--resolution", "64", "--lines", "3", "--samples", "200", "--grid", "16", "--no-timestamp"]


def run(tmp_path, *args):
    return cli.main([*args, "--out", str(tmp_path)])


def test_pass_writes_report(tmp_path):
    assert run(tmp_path, "homeo", *QUICK) == 0
    doc = json.loads((tmp_path / "remark-homeomorphism.json").read_text("utf-8"))
    assert doc["pass"] is True and "timestamp" not in doc
    assert doc["config"]["samples"] == 200


def test_timestamp_present_by_default(tmp_path):
    assert run(tmp_path, "starlike") == 0
    assert "timestamp" in json.loads((tmp_path / "remark-starlike.json").read_text())


def exit_code(*args):
    try:
        return cli.main(list(args))
    except SystemExit as e:  # argparse rejects the command line
        return e.code


@pytest.mark.parametrize(
    "args",
    [["verify-g2", "--lines", "0"], ["linconvex", "--samples", "0"], ["slice"], ["counterexample", "--n", "2"],
     ["slice", "--base", "0,0", "--dir", "1"], ["gamma-union", "--x", "2"], ["homeo", "--resolution", "32"],
     ["nope"], ["homeo", "--seed", "abc"], ["starlike", "--format", "xml"], ["homeo", "--n", "x"]],
)
def test_usage_errors_exit_1(tmp_path, args):
    assert exit_code(*args, "--out", str(tmp_path)) == 1


def test_argparse_errors_use_code_1(tmp_path):
    with pytest.raises(SystemExit) as e:
        run(tmp_path, "nope")
    assert e.value.code == 1


def test_failed_claim_exits_2(tmp_path, monkeypatch):
    monkeypatch.setitem(cli.COMMANDS, "starlike", lambda cfg: ClaimReport("remark-starlike", False, {"x": 1.0}))
    assert run(tmp_path, "starlike", "--no-timestamp") == 2
    assert json.loads((tmp_path / "remark-starlike.json").read_text())["pass"] is False


def test_internal_error_exits_1(tmp_path, monkeypatch):
    def boom(cfg):
        raise RuntimeError("broken")

    monkeypatch.setitem(cli.COMMANDS, "starlike", boom)
    assert run(tmp_path, "starlike") == 1


def test_slice_artifacts_and_csv(tmp_path):
    assert run(tmp_path, "slice", "--n", "2", "--base", "0,0", "--dir", "1,0", "--format", "csv", *QUICK) == 0
    doc = json.loads((tmp_path / "slice.json").read_text())
    assert doc["metrics"]["components"] == 1
    for name in doc["artifacts"]:
        assert not os.path.isabs(name) and (tmp_path / name).stat().st_size > 0
    rows = list(csv.reader((tmp_path / "slice.csv").open()))
    assert rows[0] == ["metric", "value"]


def test_counterexample_sweep_csv(tmp_path):
    assert run(tmp_path, "counterexample", "--t", "0.3,0.8", "--format", "csv", *QUICK) == 0
    rows = list(csv.DictReader((tmp_path / "thm1ii-disconnect.csv").open()))
    assert list(rows[0])[:4] == ["t", "components", "holes", "separated"]
    assert {r["t"] for r in rows} == {"0.3", "0.8"}


def test_tolerance_override_recorded(tmp_path):
    assert run(tmp_path, "starlike", "--tol-boundary", "1e-7", *QUICK) == 0
    doc = json.loads((tmp_path / "remark-starlike.json").read_text())
    assert doc["config"]["tolerances"]["boundary"] == 1e-7


def test_complex_vectors_parse(tmp_path):
    assert run(tmp_path, "slice", "--base", "0.1+0.2j,0", "--dir", "1j,0.5", *QUICK) == 0
    assert json.loads((tmp_path / "slice.json").read_text())["config"]["base"][0] == [0.1, 0.2]


def test_no_temp_files_left(tmp_path):
    run(tmp_path, "homeo", *QUICK)
    assert not [p for p in tmp_path.iterdir() if p.name.startswith(".")]


def test_all_is_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert cli.main(["all", *QUICK, "--out", str(a)]) == 0
    assert cli.main(["all", *QUICK, "--out", str(b)]) == 0
    names = sorted(p.name for p in a.iterdir())
    assert names == sorted(p.name for p in b.iterdir())
    assert len([n for n in names if n.endswith(".json")]) == len(cli.SUITE)
    for n in names:
        assert (a / n).read_bytes() == (b / n).read_bytes()


def test_console_script(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "ccx.cli", "starlike", "--out", str(tmp_path), "--no-timestamp"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("PASS remark-starlike")
