import csv
import io
import json
import shutil
import subprocess

import pytest

from memsearch.harness.cli import main
from memsearch.harness.runner import RECORD_FIELDS


def run_cli(capsys, *argv):
    try:
        code = main(list(argv))
    except SystemExit as exc:
        code = exc.code
    out = capsys.readouterr()
    return code, out.out, out.err


def test_run_prints_one_record(capsys):
    code, out, _ = run_cli(capsys, "run", "--algo", "gondor", "--domain", "chain", "--params",
                           '{"n": 30}', "--node-budget", "8", "--outpost-p", "0.2", "--seed", "3",
                           "--show-plan")
    assert code == 0
    lines = out.splitlines()
    rows = list(csv.DictReader(io.StringIO("\n".join(lines[:2]))))
    assert list(rows[0]) == RECORD_FIELDS
    assert rows[0]["status"] == "SOLVED" and rows[0]["plan_length"] == "29"
    assert lines[2].split() == [f"a{i}" for i in range(29)]


def test_run_explicit_file(capsys, tmp_path):
    path = tmp_path / "g.graph"
    path.write_text("vertex a h=1\nvertex b h=0 goal\nedge a go b\ninit a\n")
    code, out, _ = run_cli(capsys, "run", "--algo", "gbfs", "--domain", "explicit",
                           "--params", json.dumps({"path": str(path)}), "--show-plan")
    assert code == 0 and out.splitlines()[-1] == "go"


@pytest.mark.parametrize("argv", [
    ["run", "--algo", "astar", "--domain", "grid"],
    ["run", "--domain", "grid"],
    ["run", "--algo", "gbfs", "--domain", "grid", "--params", "{bad json"],
    ["run", "--algo", "gbfs", "--domain", "grid", "--closed", "cuckoo"],
    ["frobnicate"],
    [],
])
def test_usage_errors_exit_1(capsys, argv):
    code, _, err = run_cli(capsys, *argv)
    assert code == 1 and "error" in err


def test_run_error_exits_2(capsys):
    code, out, _ = run_cli(capsys, "run", "--algo", "gbfs", "--domain", "nowhere")
    assert code == 2 and ",ERROR," in out


def test_matrix_and_reports(capsys, tmp_path):
    config = {
        "defaults": {"node_budget": 12, "outpost_p": 0.2},
        "instances": [{"domain": "chain", "params": {"n": 20}, "heuristics": ["file", "zero"]},
                      {"domain": "grid", "params": {"width": 6}, "instance_seeds": [0],
                       "heuristics": ["manhattan", "anti-manhattan"]}],
        "grid": {"algo": ["gbfs", "gondor"]},
    }
    cfg = tmp_path / "m.json"
    cfg.write_text(json.dumps(config))
    out_dir = tmp_path / "out"
    code, out, _ = run_cli(capsys, "matrix", "--config", str(cfg), "--out", str(out_dir),
                           "--workers", "2")
    assert code == 0 and out.startswith("8 runs")
    assert len(list((out_dir / "runs").glob("*.csv"))) == 8

    code, out, _ = run_cli(capsys, "report", "coverage", "--records", str(out_dir), "--csv",
                           str(tmp_path / "cov.csv"))
    assert code == 0 and "Max (2)" in out and "gondor" in out
    assert (tmp_path / "cov.csv").read_text().startswith("domain,config")

    code, out, _ = run_cli(capsys, "report", "scatter", "--records", str(out_dir), "--x", "gbfs",
                           "--y", "gondor", "--metric", "expanded")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 4


def test_report_shape_mismatch_exits_2(capsys, tmp_path):
    config = {"instances": [{"domain": "chain", "params": {"n": 5}, "heuristics": ["file", "zero"]},
                            {"domain": "grid", "params": {"width": 4}}],
              "grid": {"algo": ["gbfs"]}}
    cfg = tmp_path / "m.json"
    cfg.write_text(json.dumps(config))
    assert run_cli(capsys, "matrix", "--config", str(cfg), "--out", str(tmp_path / "o"))[0] == 0
    code, _, err = run_cli(capsys, "report", "coverage", "--records", str(tmp_path / "o"))
    assert code == 2 and "SHAPE_MISMATCH" in err
    assert run_cli(capsys, "report", "coverage", "--records", str(tmp_path / "o"),
                   "--allow-ragged")[0] == 0


def test_bad_inputs_exit_1(capsys, tmp_path):
    assert run_cli(capsys, "matrix", "--config", str(tmp_path / "none.json"), "--out",
                   str(tmp_path))[0] == 1
    assert run_cli(capsys, "report", "coverage", "--records", str(tmp_path / "nothing.csv"))[0] == 1


@pytest.mark.skipif(shutil.which("search") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["search", "run", "--algo", "gbfs", "--domain", "grid", "--params",
                          '{"width": 4}'], capture_output=True, text=True)
    assert res.returncode == 0 and "SOLVED" in res.stdout
