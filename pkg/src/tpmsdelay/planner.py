"""Pick (C_L, S) that meets a delay budget with the most gateway sleep."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Union

from .analytics import power_saving_ratio, success_probability
from .cycles import gcd

OBJECTIVES = ("bound-worst-delay", "bound-expected-delay")


@dataclass(frozen=True)
class PlanRequest:
    delay_budget: float
    n_sensors: int = 1
    c_l: Union[int, Iterable[int]] = 32
    objective: str = "bound-worst-delay"
    prefer_smaller_cl: bool = False

    def __post_init__(self):
        if self.delay_budget < 1:
            raise ValueError("delay budget must be >= 1 slot")
        if self.n_sensors < 1:
            raise ValueError("n_sensors must be >= 1")
        if self.objective not in OBJECTIVES:
            raise ValueError(f"objective must be one of {OBJECTIVES}")
        if not self.candidates():
            raise ValueError("empty C_L range")
        if min(self.candidates()) < 2:
            raise ValueError("C_L candidates must be >= 2")

    def candidates(self) -> tuple:
        if isinstance(self.c_l, int):
            return (self.c_l,)
        return tuple(self.c_l)


@dataclass(frozen=True)
class PlanResult:
    c_l: Optional[int]
    s: Optional[int]
    achieved_delay: Optional[float]
    power_saving_ratio: Optional[float]
    feasible: bool


def objective_delay(c_l: int, s: int, n_sensors: int, objective: str) -> float:
    w_delay = c_l * (s + 1) - s
    if objective == "bound-worst-delay":
        return w_delay
    return w_delay / success_probability(c_l, n_sensors)


def max_sleep(c_l: int, budget: float, n_sensors: int, objective: str) -> Optional[int]:
    """Largest S < C_L with gcd(C_L, 1+S) = 1 and objective delay within budget."""
    # objective delay is increasing in S, so bound S first and walk down to a coprime one
    hi = min(c_l - 1, int((budget - c_l) // (c_l - 1)) if budget >= c_l else -1)
    while hi >= 0 and objective_delay(c_l, hi, n_sensors, objective) > budget:
        hi -= 1
    for s in range(hi, -1, -1):
        if gcd(c_l, s + 1) == 1:
            return s
    return None


def plan(request: PlanRequest) -> PlanResult:
    """Best feasible (C_L, S): most sleep first, then larger C_L (or smaller, if asked)."""
    best = None
    for c_l in request.candidates():
        s = max_sleep(c_l, request.delay_budget, request.n_sensors, request.objective)
        if s is None:
            continue
        key = (s, -c_l if request.prefer_smaller_cl else c_l)
        if best is None or key > best[0]:
            best = (key, c_l, s)
    if best is None:
        return PlanResult(None, None, None, None, False)
    _, c_l, s = best
    return PlanResult(c_l, s, objective_delay(c_l, s, request.n_sensors, request.objective),
                      power_saving_ratio(1, s), True)
