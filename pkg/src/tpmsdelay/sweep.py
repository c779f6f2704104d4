"""Analytic vs simulated sweeps over (S, N) and their CSV/JSON renderings."""

from __future__ import annotations

import csv
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .analytics import (DutyCycleConfig, analyze, average_delay_over_phases,
                        ccr, check_finite)
from .errors import NotFiniteError
from .simulator import run_experiment, schedule_for

CSV_COLUMNS = (
    "s", "n", "cl", "trials",
    "analytic_worst", "analytic_expected", "analytic_avg",
    "sim_worst", "sim_expected", "sim_expected_ci", "sim_avg",
    "power_saving_pct",
)
DELAY_COLUMNS = CSV_COLUMNS[4:11]
METRICS = {
    "worst": ("analytic_worst", "sim_worst"),
    "expected": ("analytic_expected", "sim_expected"),
    "avg": ("analytic_avg", "sim_avg"),
}
NA = "n/a"


@dataclass(frozen=True)
class SweepSpec:
    s_values: tuple = (2, 6, 30)
    n_values: tuple = tuple(range(4, 33, 4))
    c_l: int = 32
    trials: int = 10_000
    base_seed: int = 2024
    slot_duration: float = 1.0
    allow_infinite: bool = False

    def __post_init__(self):
        if not self.s_values or not self.n_values:
            raise ValueError("s_values and n_values must be non-empty")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        for s in self.s_values:
            cfg = DutyCycleConfig(c_l=self.c_l, s=s)
            if not check_finite(cfg) and not self.allow_infinite:
                raise NotFiniteError(
                    f"gcd(C_L={self.c_l}, 1+S={1 + s}) != 1; pass allow_infinite to sweep it")
            if s >= self.c_l and check_finite(cfg):
                raise ValueError(f"S={s} must be below C_L={self.c_l}")

    @property
    def cells(self) -> list:
        return [(s, n) for s in self.s_values for n in self.n_values]


def cell_seed(base_seed: int, s: int, n: int) -> int:
    """Per-cell base seed; cells stay independent of one another."""
    return (base_seed * 1_000_003 + s * 10_007 + n) & ((1 << 64) - 1)


def _run_cell(args) -> dict:
    spec, s, n = args
    cfg = DutyCycleConfig(c_l=spec.c_l, s=s, n_sensors=n, slot_duration=spec.slot_duration)
    finite = check_finite(cfg)
    max_slots = None if finite else 16 * schedule_for(cfg).round_len
    sim = run_experiment(cfg, spec.trials, cell_seed(spec.base_seed, s, n), max_slots=max_slots)
    row = dict(s=s, n=n, cl=spec.c_l, trials=spec.trials)
    if finite:
        res = analyze(cfg)
        row.update(analytic_worst=res.w_delay,
                   analytic_expected=res.expected_worst_delay,
                   analytic_avg=average_delay_over_phases(cfg, collisions=True))
    else:
        row.update(analytic_worst=NA, analytic_expected=NA, analytic_avg=NA)
    row.update(sim_worst=sim.worst_activation_delay,
               sim_expected=sim.expected_worst_delay,
               sim_expected_ci=sim.confidence_halfwidth,
               sim_avg=sim.average_delay,
               power_saving_pct=sim.power_saving_ratio)
    return row


def run_sweep(spec: SweepSpec, jobs: int = 1) -> list:
    work = [(spec, s, n) for s, n in spec.cells]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, work))
    return [_run_cell(w) for w in work]


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6f}"
    return str(v)


def to_csv(rows: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def to_json(rows: list, slot_duration: float = 1.0) -> str:
    out = []
    for row in rows:
        rec = {c: row[c] for c in CSV_COLUMNS}
        rec["seconds"] = {c: (NA if row[c] == NA else row[c] * slot_duration)
                          for c in DELAY_COLUMNS}
        out.append(rec)
    doc = {"columns": list(CSV_COLUMNS), "slot_duration": slot_duration, "rows": out}
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def load_dataset(path) -> list:
    """Read rows written by :func:`to_csv` or :func:`to_json`."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if text.lstrip().startswith("{"):
        return json.loads(text)["rows"]
    rows = list(csv.DictReader(io.StringIO(text)))
    for row in rows:
        for k, v in row.items():
            if v != NA:
                row[k] = float(v)
    return rows


def dataset_ccr(rows: list, metric: str) -> float:
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; choose from {sorted(METRICS)}")
    a_col, m_col = METRICS[metric]
    pairs = [(float(r[a_col]), float(r[m_col])) for r in rows
             if r[a_col] != NA and r[m_col] != NA]
    return ccr([a for a, _ in pairs], [m for _, m in pairs])
