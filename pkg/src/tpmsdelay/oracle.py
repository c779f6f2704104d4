"""Brute-force slot walks used as ground truth for the closed forms.

The walk for arrival phase ``n`` visits ``n, n + C_L, n + 2*C_L, ...`` and stops
at the first slot where the gateway is awake. Slot ``t`` is awake iff
``(t - 1) mod (W + S) < W``.

Safe horizon: the residues ``(n + k*C_L - 1) mod (W + S)`` are periodic in ``k``
with period ``(W+S)/gcd(C_L, W+S) <= W+S``. If none of the first ``W+S`` arrivals
hits a wake slot, none ever will. Those arrivals all lie at or before slot
``n + (W+S)*C_L``, so a horizon of at least that makes NeverReceived exact.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .cycles import solve_min_cycles
from .errors import InsufficientHorizonError, InvalidPhaseError, NotFiniteError


@dataclass(frozen=True)
class Reception:
    delay: int  # absolute reception slot, slot 1 = first wake slot
    c_cycles: int  # extra duty-cycles waited after the arrival
    wake_cycles: int  # complete wakeup-sleep cycles before the reception cycle


class _NeverReceived:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "NeverReceived"

    def __bool__(self) -> bool:
        return False


NeverReceived = _NeverReceived()
PhaseResult = Union[Reception, _NeverReceived]


def is_awake(t: int, w: int, s: int) -> bool:
    return (t - 1) % (w + s) < w


def safe_horizon(n: int, c_l: int, w: int, s: int) -> int:
    return n + (w + s) * c_l


def _check_config(c_l: int, w: int, s: int) -> None:
    if c_l < 1 or w < 1 or s < 0:
        raise ValueError(f"invalid schedule C_L={c_l}, W={w}, S={s}")


def delay_for_phase(n: int, c_l: int, w: int, s: int,
                    horizon: Optional[int] = None,
                    exact: bool = True) -> PhaseResult:
    """Walk the arrivals of phase ``n`` until one lands on a wake slot.

    ``horizon`` defaults to the safe bound. A shorter horizon is rejected when
    ``exact`` is requested, since NeverReceived would then be a guess.
    """
    _check_config(c_l, w, s)
    if not 1 <= n <= c_l:
        raise InvalidPhaseError(f"arrival phase {n} outside 1..{c_l}")
    bound = safe_horizon(n, c_l, w, s)
    if horizon is None:
        horizon = bound
    elif exact and horizon < bound:
        raise InsufficientHorizonError(
            f"horizon {horizon} below safe bound {bound} for phase {n}")
    period = w + s
    t, k = n, 0
    while t <= horizon:
        if (t - 1) % period < w:
            return Reception(t, k, (t - 1) // period)
        t += c_l
        k += 1
    return NeverReceived


@dataclass(frozen=True)
class PhaseDelayTable:
    c_l: int
    w: int
    s: int
    entries: tuple = field(repr=False)  # entries[n - 1] for phase n

    def entry(self, n: int) -> PhaseResult:
        return self.entries[n - 1]

    @property
    def finite(self) -> bool:
        return all(isinstance(e, Reception) for e in self.entries)

    @property
    def never_received(self) -> list:
        return [n for n, e in enumerate(self.entries, 1) if e is NeverReceived]

    @property
    def received(self) -> list:
        return [(n, e) for n, e in enumerate(self.entries, 1) if isinstance(e, Reception)]

    @property
    def argmax_phase(self) -> int:
        """Phase with the latest reception slot (over received phases)."""
        n, _ = max(self.received, key=lambda item: item[1].delay)
        return n

    @property
    def max_delay(self) -> int:
        return self.entry(self.argmax_phase).delay

    def delays(self) -> list:
        """Reception slot per phase, None where never received."""
        return [e.delay if isinstance(e, Reception) else None for e in self.entries]


def build_phase_table(c_l: int, w: int, s: int) -> PhaseDelayTable:
    _check_config(c_l, w, s)
    entries = tuple(delay_for_phase(n, c_l, w, s) for n in range(1, c_l + 1))
    return PhaseDelayTable(c_l, w, s, entries)


@dataclass(frozen=True)
class VerificationReport:
    c_l: int
    s: int
    finiteness_match: bool
    t_max_match: bool
    w_delay_match: bool
    c_l_min_match: bool
    n_sleep_min_match: bool
    detail: str = ""

    @property
    def passed(self) -> bool:
        return all((self.finiteness_match, self.t_max_match, self.w_delay_match,
                    self.c_l_min_match, self.n_sleep_min_match))


def verify_against_analytic(c_l: int, s: int, analytic=None) -> VerificationReport:
    """Compare the oracle table for (C_L, W=1, S) with the closed forms.

    ``analytic`` defaults to :func:`tpmsdelay.analytics.analyze`; any callable
    with the same signature can be injected (the CLI uses this for its
    fault-injection self test).
    """
    from .analytics import DutyCycleConfig, analyze

    analytic = analytic or analyze
    table = build_phase_table(c_l, 1, s)
    result = analytic(DutyCycleConfig(c_l=c_l, w=1, s=s))
    oracle_finite = table.finite
    if not result.finite or not oracle_finite:
        same = result.finite == oracle_finite
        return VerificationReport(c_l, s, same, same, same, same, same,
                                  "" if same else
                                  f"finite: analytic={result.finite} oracle={oracle_finite}")
    n_max = table.argmax_phase
    rec = table.entry(n_max)
    oracle_sleep = (rec.delay - 1) // (1 + s)
    try:
        sol = solve_min_cycles(n_max, c_l, 1, s)
        solver_ok = (sol.c_min, sol.n_sleep_min) == (rec.c_cycles, oracle_sleep)
    except NotFiniteError:
        solver_ok = False
    checks = dict(
        t_max_match=result.t_max == n_max,
        w_delay_match=result.w_delay == rec.delay,
        c_l_min_match=result.c_l_min == rec.c_cycles and solver_ok,
        n_sleep_min_match=result.n_sleep_min == oracle_sleep and solver_ok,
    )
    bad = [k for k, ok in checks.items() if not ok]
    detail = ""
    if bad:
        detail = (f"{','.join(bad)}: analytic t_max={result.t_max} w_delay={result.w_delay} "
                  f"c_min={result.c_l_min} n_sleep={result.n_sleep_min}; oracle "
                  f"t_max={n_max} w_delay={rec.delay} c_min={rec.c_cycles} "
                  f"n_sleep={oracle_sleep}")
    return VerificationReport(c_l, s, True, detail=detail, **checks)


def verify_all(max_cl: int, analytic=None) -> list:
    """Run :func:`verify_against_analytic` for every 2 <= C_L <= max_cl, 0 <= S < C_L."""
    return [verify_against_analytic(c_l, s, analytic)
            for c_l in range(2, max_cl + 1) for s in range(c_l)]
