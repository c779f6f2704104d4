"""One test per acceptance criterion; the run ends with a PASS/FAIL line for each."""

import math
import random
import time

import numpy as np
import pytest

from tpmsdelay.analytics import (DutyCycleConfig, analyze, expected_worst_delay,
                                 power_saving_ratio)
from tpmsdelay.cli import main
from tpmsdelay.errors import BadLengthError, ChecksumMismatchError
from tpmsdelay.frame import SensorFrame, decode, encode
from tpmsdelay.oracle import NeverReceived, build_phase_table, delay_for_phase, safe_horizon, verify_all
from tpmsdelay.planner import OBJECTIVES, PlanRequest, plan
from tpmsdelay.simulator import run_experiment
from tpmsdelay.sweep import SweepSpec, dataset_ccr, load_dataset


def test_criterion_01_worked_example(capsys):
    assert main(["analyze", "--cl", "32", "--s", "2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert {"t_max=30", "c_l_min=2", "n_sleep_min=31", "w_delay=94"} <= set(out)
    cfg = DutyCycleConfig(32, s=2)
    best = math.inf
    for _ in range(200):
        t0 = time.perf_counter()
        res = analyze(cfg)
        best = min(best, time.perf_counter() - t0)
    assert (res.t_max, res.c_l_min, res.n_sleep_min, res.w_delay) == (30, 2, 31, 94)
    print(f"analyze runtime {best * 1e6:.1f} us")
    assert best < 1e-3


def test_criterion_02_not_finite_counterexample(capsys):
    assert main(["analyze", "--cl", "32", "--s", "3"]) == 2
    assert "NOT FINITE" in capsys.readouterr().out
    never = [n for n in range(1, 33)
             if delay_for_phase(n, 32, 1, 3, horizon=safe_horizon(n, 32, 1, 3)) is NeverReceived]
    assert len(never) >= 1 and never == build_phase_table(32, 1, 3).never_received


def test_criterion_03_oracle_equivalence_sweep():
    t0 = time.perf_counter()
    reports = verify_all(64)
    elapsed = time.perf_counter() - t0
    # C_L in 2..64 with S in 0..C_L-1 is sum(2..64) = 2079 configurations
    assert len(reports) == sum(range(2, 65)) == 2079
    bad = [(r.c_l, r.s, r.detail) for r in reports if not r.passed]
    print(f"{len(reports)} configs, {len(bad)} mismatches, {elapsed:.2f} s")
    assert not bad
    assert elapsed < 10


def test_criterion_04_cycle_count_properties():
    checked = 0
    for c_l in range(2, 65):
        for s in range(c_l):
            table = build_phase_table(c_l, 1, s)
            if not table.finite:
                continue
            cycles = {n: table.entry(n).c_cycles for n in range(1, c_l + 1)}
            assert max(cycles.values()) == s
            classes = {}
            for n, c in cycles.items():
                classes.setdefault(n % (s + 1), set()).add(c)
            assert all(len(v) == 1 for v in classes.values())
            assert sorted(next(iter(v)) for v in classes.values()) == list(range(s + 1))
            checked += 1
    print(f"{checked} finite configs checked")


def test_criterion_05_series_vs_closed_form():
    worst = 0.0
    for s in (2, 6, 30):
        for n in range(4, 33):
            cfg = DutyCycleConfig(32, s=s, n_sensors=n)
            closed = expected_worst_delay(cfg)
            series = expected_worst_delay(cfg, terms=10_000)
            worst = max(worst, abs(series - closed) / closed)
    print(f"max relative error {worst:.2e}")
    assert worst < 1e-6


def test_criterion_06_monte_carlo_convergence():
    t0 = time.perf_counter()
    for n in (4, 16, 32):
        cfg = DutyCycleConfig(32, s=2, n_sensors=n)
        target = expected_worst_delay(cfg)
        got = run_experiment(cfg, 10_000, 2024).expected_worst_delay
        print(f"N={n}: simulated {got:.3f} vs closed form {target:.3f} "
              f"({100 * (got - target) / target:+.2f}%)")
        assert abs(got - target) / target < 0.03
    elapsed = time.perf_counter() - t0
    print(f"runtime {elapsed:.1f} s")
    assert elapsed < 60


def test_criterion_07_power_saving_ratio():
    stated = {2: 66.7, 6: 85.7, 30: 96.77}
    for s, want in stated.items():
        values = {round(run_experiment(DutyCycleConfig(32, s=s, n_sensors=n), 50, 1).power_saving_ratio, 9)
                  for n in range(4, 33, 4)}
        assert len(values) == 1
        got = values.pop()
        assert got == pytest.approx(power_saving_ratio(1, s))
        assert abs(got - want) <= 0.05, (s, got)


def test_criterion_08_ccr_default_sweep(tmp_path):
    path = tmp_path / "default.csv"
    assert main(["sweep", "--trials", "10000", "--out", str(path)]) == 0
    rows = load_dataset(path)
    assert len(rows) == len(SweepSpec().cells) == 24
    for metric in ("worst", "expected", "avg"):
        value = dataset_ccr(rows, metric)
        print(f"CCR {metric}: {value:.3f}%")
        if metric != "expected":
            assert value > 97.0


def test_criterion_09_sweep_determinism(tmp_path):
    outs = []
    for jobs in ("1", "1", "2"):
        path = tmp_path / f"run{len(outs)}.csv"
        assert main(["sweep", "--trials", "1000", "--seed", "77", "--jobs", jobs, "--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1] == outs[2]
    cfg = DutyCycleConfig(32, s=6, n_sensors=12)
    assert run_experiment(cfg, 3000, 5) == run_experiment(cfg, 3000, 5, workers=2)


def test_criterion_10_codec():
    rng = np.random.default_rng(10)
    n = 100_000
    ids = rng.integers(0, 2**32, size=n)
    quarters = rng.integers(0, 5601, size=n)
    temps = rng.integers(-40, 126, size=n)
    alerts = rng.integers(0, 2, size=n)
    batt = rng.integers(0, 101, size=n)
    status = rng.integers(0, 16, size=n)
    for i in range(n):
        f = SensorFrame(int(ids[i]), int(quarters[i]) / 4, int(temps[i]), bool(alerts[i]),
                        int(batt[i]), int(status[i]))
        assert decode(encode(f)) == f
    assert encode(SensorFrame(16, 250.0, 25, True, 90, 2)).hex() == "0000001003e841825a18"
    assert encode(SensorFrame(1, 0.0, -40)).hex() == "00000001000000006465"
    with pytest.raises(BadLengthError):
        decode(bytes(9))
    with pytest.raises(ChecksumMismatchError):
        decode(bytes.fromhex("0000001003e841825a19"))


def test_criterion_11_planner_maximality():
    rnd = random.Random(11)
    for _ in range(200):
        c_l = rnd.randint(2, 128)
        n = rnd.randint(1, 64)
        budget = rnd.uniform(1, 20_000)
        objective = rnd.choice(OBJECTIVES)
        res = plan(PlanRequest(budget, n, c_l, objective))
        best = None
        for s in range(c_l):
            if math.gcd(c_l, s + 1) != 1:
                continue
            w_delay = c_l * (s + 1) - s
            d = w_delay if objective == OBJECTIVES[0] else w_delay / ((c_l - 1) / c_l) ** (n - 1)
            if d <= budget:
                best = s
        assert res.s == best
        if res.feasible:
            assert math.gcd(res.c_l, res.s + 1) == 1 and res.c_l > res.s
            check = analyze(DutyCycleConfig(res.c_l, s=res.s, n_sensors=n))
            bound = check.w_delay if objective == OBJECTIVES[0] else check.expected_worst_delay
            assert bound <= budget and bound == pytest.approx(res.achieved_delay)
