"""Seeded Monte Carlo simulation of N sensors contending for a sleepy gateway.

Traffic model
-------------
Time is cut into activation rounds of ``L = C_L * (W + S)`` slots. L is a
multiple of both the sensor period and the gateway cycle, so every round starts
on a wake slot and sees the same gateway geometry as slot 1.

At the start of every round each sensor draws a fresh phase ``p`` uniformly
from ``1..C_L`` and transmits at ``round_start + p + k*C_L``. It keeps going
until a frame gets through or the re-activation threshold ``T_delay`` (the
largest collision-free reception slot; equal to ``C_L(S+1) - S`` in the
analytic regime) has passed. A frame gets through iff the gateway is awake and
no other sensor transmits in that slot. Overlapping frames are lost whether or
not the gateway is awake.

Traffic is saturated: sensors that were already received keep reporting, so a
sensor contends with all N-1 others in every round it needs. Unreceived
sensors therefore see the same collision odds in every round.

Reported statistics
-------------------
Per sensor the simulator records the absolute slot of its first reception, the
number of activations that took, the reception delay within the successful
activation, and a *charged* delay where every activation costs the slot at which
its frame was (or would have been) heard. Aggregates:

* ``worst_activation_delay``: the longest single-activation reception delay
  seen (empirical counterpart of the collision-free worst delay);
* ``expected_worst_delay``: ``worst_activation_delay`` times the mean number of
  activations per sensor, i.e. every lost activation billed at the worst case;
* ``average_delay``: mean charged delay;
* ``worst_delay`` / ``mean_reception_delay``: max / mean absolute first
  reception slot.

Randomness
----------
Trial ``i`` of an experiment uses ``trial_seed(base_seed, i)``, a 64-bit word
drawn from ``numpy.random.SeedSequence(base_seed, spawn_key=(i,))``. The trial
then owns a PCG64 stream (``numpy.random.default_rng(seed)``) from which the
phases of round ``r`` are the ``r``-th block of N draws. Results depend only on
(config, base_seed, trial index), never on chunking or worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .analytics import DutyCycleConfig
from .oracle import build_phase_table

SEED_MASK = (1 << 64) - 1
MAX_SLOTS_FACTOR = 64
_Z95 = 1.959963984540054


@dataclass(frozen=True)
class Schedule:
    """Per-phase geometry shared by both simulation engines."""

    c_l: int
    w: int
    s: int
    round_len: int
    threshold: int  # T_delay, slots after activation
    delay: tuple  # delay[p] reception offset for phase p, None if never received
    max_finite: int

    def transmissions(self, p: int) -> int:
        """Frames sent in a round by a sensor that is not received in it."""
        return (self.threshold - p) // self.c_l + 1

    def charge(self, p: int) -> int:
        d = self.delay[p]
        return self.threshold if d is None else d


def schedule_for(config: DutyCycleConfig) -> Schedule:
    table = build_phase_table(config.c_l, config.w, config.s)
    delays = (None,) + tuple(table.delays())
    max_finite = max(d for d in delays if d is not None)
    threshold = max(max_finite, config.c_l)
    return Schedule(config.c_l, config.w, config.s, config.c_l * config.period,
                    threshold, delays, max_finite)


def default_max_slots(config: DutyCycleConfig) -> int:
    sched = schedule_for(config)
    return MAX_SLOTS_FACTOR * sched.max_finite


def trial_seed(base_seed: int, index: int) -> int:
    ss = np.random.SeedSequence(base_seed & SEED_MASK, spawn_key=(index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


@dataclass
class SensorState:
    id: int
    phase: int
    received: bool = False
    first_success_slot: Optional[int] = None
    collision_count: int = 0
    slots_since_activation: int = 0
    activations: int = 0
    charged: int = 0
    activation_delay: Optional[int] = None
    first_round_collided: bool = False
    done_this_round: bool = False


@dataclass(frozen=True)
class SensorOutcome:
    delay: Optional[int]  # absolute first reception slot; None = not received in trial
    collisions: int
    activations: int
    activation_delay: Optional[int]
    charged_delay: Optional[int]
    first_round_collided: bool


@dataclass(frozen=True)
class TrialMetrics:
    per_sensor: tuple
    worst_delay_observed: Optional[int]
    mean_delay: Optional[float]
    total_collision_events: int
    slots_simulated: int
    rounds: int

    @property
    def received(self) -> list:
        return [o for o in self.per_sensor if o.delay is not None]


def _sleep_slots(rounds: int, sched: Schedule) -> int:
    period = sched.w + sched.s
    per_round = sum(1 for t in range(1, sched.round_len + 1) if (t - 1) % period >= sched.w)
    return rounds * per_round


def run_trial(config: DutyCycleConfig, seed: int,
              max_slots: Optional[int] = None) -> TrialMetrics:
    """Slot-by-slot reference simulation of one trial."""
    sched = schedule_for(config)
    if max_slots is None:
        max_slots = MAX_SLOTS_FACTOR * sched.max_finite
    rng = np.random.default_rng(seed & SEED_MASK)
    n, c_l, period, L = config.n_sensors, config.c_l, config.period, sched.round_len
    sensors = [SensorState(i + 1, 1) for i in range(n)]
    pending = n
    events = 0
    round_start = 0
    t = 0
    rounds = 0
    for t in range(1, max_slots + 1):
        if (t - 1) % L == 0:
            round_start = t - 1
            rounds += 1
            for st, p in zip(sensors, rng.integers(1, c_l + 1, size=n)):
                st.phase = int(p)
                st.done_this_round = False
                if not st.received:
                    st.activations += 1
        rel = t - round_start
        tx = [st for st in sensors
              if not st.done_this_round and st.phase <= rel <= sched.threshold
              and (rel - st.phase) % c_l == 0]
        for st in sensors:
            if not st.received:
                st.slots_since_activation = rel
        if len(tx) >= 2:
            events += 1
            for st in tx:
                if not st.received:
                    st.collision_count += 1
                    if st.activations == 1:
                        st.first_round_collided = True
                    if rel == sched.delay[st.phase]:
                        st.charged += rel  # the frame the gateway would have decoded
        elif len(tx) == 1 and (t - 1) % period < config.w:
            st = tx[0]
            st.done_this_round = True
            if not st.received:
                st.received = True
                st.first_success_slot = t
                st.activation_delay = rel
                st.charged += rel
                pending -= 1
        if rel == sched.threshold:
            for st in sensors:
                # activations lost without any wake-slot frame cost the full threshold
                if not st.received and not st.done_this_round and sched.delay[st.phase] is None:
                    st.charged += sched.threshold
        if pending == 0:
            break
    outcomes = tuple(
        SensorOutcome(st.first_success_slot, st.collision_count, st.activations,
                      st.activation_delay, st.charged if st.received else None,
                      st.first_round_collided)
        for st in sensors)
    got = [o.delay for o in outcomes if o.delay is not None]
    return TrialMetrics(
        per_sensor=outcomes,
        worst_delay_observed=max(got) if got else None,
        mean_delay=sum(got) / len(got) if got else None,
        total_collision_events=events,
        slots_simulated=t,
        rounds=rounds,
    )


# ---------------------------------------------------------------------------
# Vectorised round-level engine.


@dataclass(frozen=True)
class TrialBlock:
    """Per-trial arrays for a contiguous range of trial indices."""

    delay: np.ndarray  # (B, N) int64, -1 where not received
    activations: np.ndarray  # (B, N)
    activation_delay: np.ndarray  # (B, N), -1 where not received
    charged: np.ndarray  # (B, N), -1 where not received
    collisions: np.ndarray  # (B, N)
    first_round_collided: np.ndarray  # (B, N) bool
    events: np.ndarray  # (B,)
    slots: np.ndarray  # (B,)
    rounds: np.ndarray  # (B,)


def _phase_arrays(sched: Schedule):
    c_l = sched.c_l
    d = np.zeros(c_l + 1, dtype=np.int64)
    fin = np.zeros(c_l + 1, dtype=bool)
    charge = np.zeros(c_l + 1, dtype=np.int64)
    k = np.zeros(c_l + 1, dtype=np.int64)
    for p in range(1, c_l + 1):
        fin[p] = sched.delay[p] is not None
        d[p] = sched.delay[p] or 0
        charge[p] = sched.charge(p)
        k[p] = sched.transmissions(p)
    return d, fin, charge, k


_FIRST_PASS_ROUNDS = 16


def simulate_block(config: DutyCycleConfig, seeds, max_slots: Optional[int] = None) -> TrialBlock:
    """Round-level simulation of many trials; bit-identical to :func:`run_trial`.

    Trials are first evaluated on a short prefix of rounds; the few that are
    still incomplete are re-run on the full horizon. The draws of a shorter run
    are a prefix of the longer one, so the split does not change any result.
    """
    sched = schedule_for(config)
    if max_slots is None:
        max_slots = MAX_SLOTS_FACTOR * sched.max_finite
    seeds = list(seeds)
    n_rounds = -(-max_slots // sched.round_len)
    if n_rounds <= _FIRST_PASS_ROUNDS:
        return _simulate_rounds(config, sched, seeds, max_slots, n_rounds)
    short = _simulate_rounds(config, sched, seeds, max_slots, _FIRST_PASS_ROUNDS)
    redo = np.flatnonzero((short.delay < 0).any(axis=1))
    if redo.size == 0:
        return short
    full = _simulate_rounds(config, sched, [seeds[j] for j in redo], max_slots, n_rounds)
    for name in TrialBlock.__dataclass_fields__:
        getattr(short, name)[redo] = getattr(full, name)
    return short


def _simulate_rounds(config, sched, seeds, max_slots, n_rounds) -> TrialBlock:
    n, c_l, L = config.n_sensors, config.c_l, sched.round_len
    b = len(seeds)
    phases = np.empty((b, n_rounds, n), dtype=np.int64)
    for j, sd in enumerate(seeds):
        phases[j] = np.random.default_rng(sd & SEED_MASK).integers(1, c_l + 1, size=(n_rounds, n))
    d, fin, charge, k = _phase_arrays(sched)

    order = np.argsort(phases, axis=2, kind="stable")
    srt = np.take_along_axis(phases, order, axis=2)
    same = srt[..., 1:] == srt[..., :-1]
    shared_sorted = np.zeros_like(srt, dtype=bool)
    shared_sorted[..., 1:] |= same
    shared_sorted[..., :-1] |= same
    group_start = shared_sorted.copy()
    group_start[..., 1:] &= ~same
    shared = np.empty_like(shared_sorted)
    np.put_along_axis(shared, order, shared_sorted, axis=2)

    round_start = (np.arange(n_rounds, dtype=np.int64) * L)[None, :, None]
    success = ~shared & fin[phases] & (round_start + d[phases] <= max_slots)
    received = success.any(axis=1)
    first = np.where(received, success.argmax(axis=1), n_rounds)
    idx = np.minimum(first, n_rounds - 1)[:, None, :]
    p_first = np.take_along_axis(phases, idx, axis=1)[:, 0, :]
    act_delay = np.where(received, d[p_first], -1)
    delay = np.where(received, first * L + d[p_first], -1)
    charged_cum = np.cumsum(charge[phases], axis=1)
    charged = np.where(received, np.take_along_axis(charged_cum, idx, axis=1)[:, 0, :], -1)

    all_in = received.all(axis=1)
    t_end = np.where(all_in, np.where(received, delay, 0).max(axis=1), max_slots)
    rel_end = t_end[:, None, None] - round_start - phases
    lost_tx = np.clip(np.floor_divide(rel_end, c_l) + 1, 0, k[phases])

    before_first = np.arange(n_rounds)[None, :, None] < first[:, None, :]
    collisions = np.where(shared & before_first, lost_tx, 0).sum(axis=1)
    events = np.where(group_start, np.take_along_axis(lost_tx, order, axis=2), 0).sum(axis=(1, 2))
    activations = np.where(received, first + 1, (t_end[:, None] - 1) // L + 1)
    rounds = (t_end - 1) // L + 1
    return TrialBlock(delay, activations, act_delay, charged, collisions,
                      shared[:, 0, :].copy(), events, t_end, rounds)


def block_to_trials(block: TrialBlock) -> list:
    trials = []
    for j in range(block.delay.shape[0]):
        outs = []
        for i in range(block.delay.shape[1]):
            got = block.delay[j, i] >= 0
            outs.append(SensorOutcome(
                int(block.delay[j, i]) if got else None,
                int(block.collisions[j, i]),
                int(block.activations[j, i]),
                int(block.activation_delay[j, i]) if got else None,
                int(block.charged[j, i]) if got else None,
                bool(block.first_round_collided[j, i])))
        got = [o.delay for o in outs if o.delay is not None]
        trials.append(TrialMetrics(tuple(outs), max(got) if got else None,
                                   sum(got) / len(got) if got else None,
                                   int(block.events[j]), int(block.slots[j]),
                                   int(block.rounds[j])))
    return trials


# ---------------------------------------------------------------------------
# Experiments.


@dataclass(frozen=True)
class AggregateMetrics:
    trials: int
    expected_worst_delay: float
    average_delay: float
    worst_delay: int
    power_saving_ratio: float
    confidence_halfwidth: float
    worst_activation_delay: int
    mean_activations: float
    mean_reception_delay: float
    first_round_collision_rate: float
    mean_collision_events: float
    unreceived: int


_CHUNK = 512


def _run_chunk(args):
    config, base_seed, start, stop, max_slots = args
    seeds = [trial_seed(base_seed, i) for i in range(start, stop)]
    blk = simulate_block(config, seeds, max_slots)
    recv = blk.delay >= 0
    n_recv = recv.sum(axis=1)
    act_sum = np.where(recv, blk.activations, 0).sum(axis=1)
    return dict(
        act_mean=np.divide(act_sum, n_recv, out=np.zeros(len(seeds)), where=n_recv > 0),
        worst_act=int(blk.activation_delay.max()),
        worst=int(blk.delay.max()),
        delay_sum=int(np.where(recv, blk.delay, 0).sum()),
        charged_sum=int(np.where(recv, blk.charged, 0).sum()),
        n_recv=int(recv.sum()),
        unreceived=int((~recv).sum()),
        tagged_collided=int(blk.first_round_collided[:, 0].sum()),
        events=int(blk.events.sum()),
        rounds=int(blk.rounds.sum()),
    )


def run_experiment(config: DutyCycleConfig, trials: int, base_seed: int,
                   max_slots: Optional[int] = None, workers: int = 1) -> AggregateMetrics:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    sched = schedule_for(config)
    if max_slots is None:
        max_slots = MAX_SLOTS_FACTOR * sched.max_finite
    jobs = [(config, base_seed, a, min(a + _CHUNK, trials), max_slots)
            for a in range(0, trials, _CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_run_chunk, jobs))
    else:
        parts = [_run_chunk(j) for j in jobs]

    act_mean = np.concatenate([p["act_mean"] for p in parts])
    worst_act = max(p["worst_act"] for p in parts)
    n_recv = sum(p["n_recv"] for p in parts)
    samples = worst_act * act_mean
    half = 0.0
    if trials > 1:
        half = _Z95 * float(np.std(samples, ddof=1)) / math.sqrt(trials)
    rounds = sum(p["rounds"] for p in parts)
    sleep = _sleep_slots(rounds, sched)
    return AggregateMetrics(
        trials=trials,
        expected_worst_delay=float(np.mean(samples)),
        average_delay=sum(p["charged_sum"] for p in parts) / n_recv if n_recv else math.nan,
        worst_delay=max(p["worst"] for p in parts),
        power_saving_ratio=100.0 * sleep / (rounds * sched.round_len),
        confidence_halfwidth=half,
        worst_activation_delay=worst_act,
        mean_activations=float(np.mean(act_mean)),
        mean_reception_delay=sum(p["delay_sum"] for p in parts) / n_recv if n_recv else math.nan,
        first_round_collision_rate=sum(p["tagged_collided"] for p in parts) / trials,
        mean_collision_events=sum(p["events"] for p in parts) / trials,
        unreceived=sum(p["unreceived"] for p in parts),
    )
