"""Closed-form delay analysis for a duty-cycled TPMS gateway.

All quantities are in slots. ``slot_duration`` only converts for display.
The analytic regime is W = 1, C_L > S, gcd(C_L, 1 + S) = 1; each operation
checks what it needs at call time.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .cycles import check_int64, gcd
from .errors import (DegenerateConfigError, EmptyInputError, NotFiniteError,
                     ZeroDenominatorError)


@dataclass(frozen=True)
class DutyCycleConfig:
    c_l: int
    w: int = 1
    s: int = 0
    n_sensors: int = 1
    slot_duration: float = 1.0

    def __post_init__(self):
        if self.c_l < 2:
            raise ValueError(f"C_L must be >= 2, got {self.c_l}")
        if self.w < 1:
            raise ValueError(f"W must be >= 1, got {self.w}")
        if self.s < 0:
            raise ValueError(f"S must be >= 0, got {self.s}")
        if self.n_sensors < 1:
            raise ValueError(f"N must be >= 1, got {self.n_sensors}")
        if not self.slot_duration > 0:
            raise ValueError(f"slot duration must be > 0, got {self.slot_duration}")
        check_int64(self.c_l * (self.w + self.s) * (self.s + 2), "C_L*(W+S)*(S+2)")

    @property
    def period(self) -> int:
        """Length of one wakeup-sleep cycle, W + S."""
        return self.w + self.s


@dataclass(frozen=True)
class DelayAnalysis:
    finite: bool
    t_max: Optional[int]
    c_l_min: Optional[int]
    n_sleep_min: Optional[int]
    w_delay: Optional[int]
    pr_success: float
    pr_collision: float
    expected_worst_delay: Optional[float]

    @property
    def waiting_time(self) -> Optional[int]:
        """Slots between the worst arrival and its reception."""
        if self.w_delay is None:
            return None
        return self.w_delay - self.t_max

    def to_dict(self) -> dict:
        d = asdict(self)
        d["waiting_time"] = self.waiting_time
        return d


def check_finite(config: DutyCycleConfig) -> bool:
    return gcd(config.c_l, config.period) == 1


def _require_analytic(config: DutyCycleConfig) -> None:
    if config.w != 1:
        raise DegenerateConfigError("closed forms hold for W = 1 only")
    if not check_finite(config):
        raise NotFiniteError(
            f"gcd(C_L={config.c_l}, W+S={config.period}) = "
            f"{gcd(config.c_l, config.period)}: some phases are never received")
    if config.c_l <= config.s:
        raise DegenerateConfigError(f"need C_L > S, got C_L={config.c_l}, S={config.s}")


def worst_arrival(config: DutyCycleConfig) -> int:
    _require_analytic(config)
    return config.c_l - config.s


def worst_delay(config: DutyCycleConfig) -> int:
    _require_analytic(config)
    return check_int64(config.c_l * (config.s + 1) - config.s, "W_delay")


def success_probability(c_l: int, n_sensors: int) -> float:
    """Chance that none of the other N-1 sensors picks the tagged sensor's slot."""
    if c_l < 2 or n_sensors < 1:
        raise ValueError(f"need C_L >= 2 and N >= 1, got C_L={c_l}, N={n_sensors}")
    return ((c_l - 1) / c_l) ** (n_sensors - 1)


def collision_probability(c_l: int, n_sensors: int) -> float:
    return 1.0 - success_probability(c_l, n_sensors)


def expected_worst_delay(config: DutyCycleConfig, terms: Optional[int] = None) -> float:
    """Expected worst delay under collisions.

    With ``terms=None`` the geometric series is summed in closed form
    (W_delay / Pr(s)); otherwise the first ``terms`` terms of
    sum_t (t+1) * W_delay * Pr(c)^t * Pr(s) are added up.
    """
    w_delay = worst_delay(config)
    p_s = success_probability(config.c_l, config.n_sensors)
    if terms is None:
        return w_delay / p_s
    if terms < 1:
        raise ValueError("terms must be >= 1")
    p_c = 1.0 - p_s
    total = 0.0
    weight = p_s  # Pr(c)^t * Pr(s)
    for t in range(terms):
        total += (t + 1) * w_delay * weight
        weight *= p_c
        if weight == 0.0:
            break
    return total


def expected_worst_delay_partial_sums(config: DutyCycleConfig, terms: int) -> list:
    w_delay = worst_delay(config)
    p_s = success_probability(config.c_l, config.n_sensors)
    p_c = 1.0 - p_s
    sums, total, weight = [], 0.0, p_s
    for t in range(terms):
        total += (t + 1) * w_delay * weight
        weight *= p_c
        sums.append(total)
    return sums


def average_delay_over_phases(config: DutyCycleConfig, collisions: bool = False) -> float:
    """Mean reception slot over the C_L arrival phases (oracle table).

    With ``collisions`` the mean is scaled by 1/Pr(s), the same geometric
    retransmission factor that turns W_delay into the expected worst delay.
    """
    from .oracle import build_phase_table

    _require_analytic(config)
    table = build_phase_table(config.c_l, config.w, config.s)
    mean = math.fsum(table.delays()) / config.c_l
    if collisions:
        mean /= success_probability(config.c_l, config.n_sensors)
    return mean


def power_saving_ratio(w: int, s: int) -> float:
    if w < 1 or s < 0:
        raise ValueError(f"need W >= 1 and S >= 0, got W={w}, S={s}")
    return 100.0 * s / (w + s)


def ccr(analytic_values: Sequence[float], measured_values: Sequence[float]) -> float:
    """Cumulative correctness rate: 100 * mean(analytic) / mean(measured)."""
    if len(analytic_values) == 0 or len(measured_values) == 0:
        raise EmptyInputError("CCR needs non-empty analytic and measured series")
    measured_mean = math.fsum(measured_values) / len(measured_values)
    if measured_mean == 0:
        raise ZeroDenominatorError("mean of measured values is zero")
    return 100.0 * (math.fsum(analytic_values) / len(analytic_values)) / measured_mean


def analyze(config: DutyCycleConfig) -> DelayAnalysis:
    """Full closed-form analysis; non-finite configs return finite=False.

    Raises DegenerateConfigError for W != 1 or C_L <= S on finite schedules.
    """
    p_s = success_probability(config.c_l, config.n_sensors)
    if not check_finite(config):
        return DelayAnalysis(False, None, None, None, None, p_s, 1.0 - p_s, None)
    w_delay = worst_delay(config)
    return DelayAnalysis(
        finite=True,
        t_max=worst_arrival(config),
        c_l_min=config.s,
        n_sleep_min=config.c_l - 1,
        w_delay=w_delay,
        pr_success=p_s,
        pr_collision=1.0 - p_s,
        expected_worst_delay=w_delay / p_s,
    )
