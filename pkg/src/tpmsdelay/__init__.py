"""Worst-case delay analysis for duty-cycled TPMS gateways."""

from .analytics import (DelayAnalysis, DutyCycleConfig, analyze, average_delay_over_phases,
                        ccr, check_finite, expected_worst_delay, power_saving_ratio,
                        success_probability, worst_arrival, worst_delay)
from .cycles import BezoutTriple, MinCycleSolution, bezout, gcd, solve_min_cycles
from .frame import SensorFrame, decode, encode
from .oracle import (NeverReceived, PhaseDelayTable, build_phase_table, delay_for_phase,
                     verify_against_analytic)
from .planner import PlanRequest, PlanResult, plan
from .simulator import AggregateMetrics, TrialMetrics, run_experiment, run_trial

__version__ = "0.1.0"
