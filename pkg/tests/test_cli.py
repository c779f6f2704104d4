import json

import pytest

from tpmsdelay.cli import main
from tpmsdelay.sweep import CSV_COLUMNS

HEADER = ("s,n,cl,trials,analytic_worst,analytic_expected,analytic_avg,"
          "sim_worst,sim_expected,sim_expected_ci,sim_avg,power_saving_pct")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_text(capsys):
    code, out, _ = run(capsys, "analyze", "--cl", "32", "--s", "2")
    assert code == 0
    for line in ("t_max=30", "c_l_min=2", "n_sleep_min=31", "w_delay=94"):
        assert line in out.splitlines()


def test_analyze_json_with_seconds(capsys):
    code, out, _ = run(capsys, "analyze", "--cl", "32", "--s", "2", "--n", "4",
                       "--slot-duration", "0.5", "--format", "json")
    d = json.loads(out)
    assert code == 0 and d["w_delay_seconds"] == 47.0
    assert d["expected_worst_delay"] == pytest.approx(103.3933, rel=1e-5)


def test_analyze_not_finite(capsys):
    code, out, _ = run(capsys, "analyze", "--cl", "32", "--s", "3", "--format", "json")
    assert code == 2
    d = json.loads(out)
    assert d["finite"] is False and 2 in d["never_received_phases"]


def test_usage_errors(capsys):
    assert run(capsys, "analyze", "--cl", "32")[0] == 1
    assert run(capsys, "analyze", "--cl", "1", "--s", "0")[0] == 1
    assert run(capsys, "bogus")[0] == 1


def test_verify(capsys):
    code, out, _ = run(capsys, "verify", "--max-cl", "16")
    assert code == 0 and "0 mismatch" in out
    code, out, _ = run(capsys, "verify", "--max-cl", "16", "--inject-fault")
    assert code == 3 and "MISMATCH" in out


def test_sweep_csv_and_ccr(capsys, tmp_path):
    path = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "sweep", "--s", "2", "--n", "4,8", "--trials", "300", "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert lines[0] == HEADER == ",".join(CSV_COLUMNS)
    assert len(lines) == 3 and lines[1].startswith("2,4,32,300,94,")
    code, out, _ = run(capsys, "ccr", str(path))
    assert code == 0 and out.startswith("worst: CCR = 100.0000%") and "avg: CCR" in out


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--s", "6", "--n", "4:8:4", "--trials", "200",
                       "--format", "json", "--slot-duration", "2")
    doc = json.loads(out)
    assert code == 0 and doc["columns"] == list(CSV_COLUMNS) and doc["slot_duration"] == 2.0
    row = doc["rows"][0]
    assert row["seconds"]["analytic_worst"] == 2 * row["analytic_worst"] == 2 * 218


def test_sweep_rejects_infinite_unless_allowed(capsys):
    assert run(capsys, "sweep", "--s", "3", "--n", "4", "--trials", "50")[0] == 2
    code, out, _ = run(capsys, "sweep", "--s", "3", "--n", "4", "--trials", "50", "--allow-infinite")
    assert code == 0 and ",n/a,n/a,n/a," in out


def test_env_overrides(capsys, monkeypatch):
    monkeypatch.setenv("TPMSDELAY_TRIALS", "40")
    code, out, _ = run(capsys, "sweep", "--s", "2", "--n", "4")
    assert code == 0 and out.splitlines()[1].split(",")[3] == "40"
    monkeypatch.setenv("TPMSDELAY_TRIALS", "many")
    assert run(capsys, "sweep", "--s", "2", "--n", "4")[0] == 1


def test_plan(capsys):
    code, out, _ = run(capsys, "plan", "--budget", "1000", "--format", "json")
    d = json.loads(out)
    assert code == 0 and (d["c_l"], d["s"], d["achieved_delay"]) == (32, 30, 962)
    code, out, _ = run(capsys, "plan", "--budget", "2000", "--cl-range", "16:64", "--prefer-smaller-cl")
    assert code == 0 and "feasible=True" in out


def test_frame_commands(capsys):
    payload = json.dumps(dict(sensor_id=16, pressure=250.0, temperature=25, alert=True,
                              battery=90, status=2))
    code, out, _ = run(capsys, "frame", "encode", payload)
    assert code == 0 and out.strip() == "0000001003e841825a18"
    code, out, _ = run(capsys, "frame", "decode", "0000001003e841825a18")
    assert code == 0 and json.loads(out)["pressure"] == 250.0
    assert run(capsys, "frame", "decode", "0000001003e841825a19")[0] == 1
    assert run(capsys, "frame", "decode", "zz")[0] == 1
    assert run(capsys, "frame", "encode", "{}")[0] == 1
