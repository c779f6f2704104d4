"""Command-line front end: ``tpmsdelay analyze|verify|sweep|ccr|plan|frame``.

Exit codes: 0 success, 1 usage or input error, 2 schedule not finite,
3 verification mismatch.

Defaults for ``--trials``, ``--seed``, ``--slot-duration`` and ``--jobs`` can be
overridden with TPMSDELAY_TRIALS, TPMSDELAY_SEED, TPMSDELAY_SLOT_DURATION and
TPMSDELAY_JOBS.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import analytics, frame, oracle, planner, sweep
from .errors import FrameError, NotFiniteError, TpmsDelayError

EXIT_OK, EXIT_USAGE, EXIT_NOT_FINITE, EXIT_MISMATCH = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _env(name, default, cast):
    raw = os.environ.get(f"TPMSDELAY_{name}")
    if raw is None:
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"TPMSDELAY_{name}={raw!r} is not a valid {cast.__name__}")


def _emit(text: str, out) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _int_list(text: str) -> list:
    """Parse "4,8,12" or "4:32:4" (inclusive range)."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(lo, hi + 1, step))
    return [int(p) for p in text.split(",") if p.strip()]


# ---------------------------------------------------------------------------


def cmd_analyze(args) -> int:
    cfg = analytics.DutyCycleConfig(c_l=args.cl, w=args.w, s=args.s, n_sensors=args.n,
                                    slot_duration=args.slot_duration)
    res = analytics.analyze(cfg)
    d = res.to_dict()
    d.update(cl=cfg.c_l, w=cfg.w, s=cfg.s, n=cfg.n_sensors,
             power_saving_pct=analytics.power_saving_ratio(cfg.w, cfg.s))
    if res.finite:
        d["w_delay_seconds"] = res.w_delay * cfg.slot_duration
        d["expected_worst_delay_seconds"] = res.expected_worst_delay * cfg.slot_duration
    else:
        d["never_received_phases"] = oracle.build_phase_table(cfg.c_l, cfg.w, cfg.s).never_received
    if args.format == "json":
        _emit(json.dumps(d, indent=2) + "\n", args.out)
    else:
        lines = [f"{k}={v}" for k, v in d.items()]
        if not res.finite:
            lines.insert(0, "NOT FINITE: some arrival phases are never received")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if res.finite else EXIT_NOT_FINITE


def _faulty_analyze(config):
    res = analytics.analyze(config)
    if res.finite:
        res = dataclasses.replace(res, w_delay=res.w_delay + 1)
    return res


def cmd_verify(args) -> int:
    reports = oracle.verify_all(args.max_cl, _faulty_analyze if args.inject_fault else None)
    bad = [r for r in reports if not r.passed]
    print(f"checked {len(reports)} configs (C_L in 2..{args.max_cl}, S < C_L): "
          f"{len(reports) - len(bad)} pass, {len(bad)} mismatch")
    for r in bad[:50]:
        print(f"  MISMATCH C_L={r.c_l} S={r.s}: {r.detail}")
    return EXIT_MISMATCH if bad else EXIT_OK


def cmd_sweep(args) -> int:
    spec = sweep.SweepSpec(
        s_values=tuple(args.s), n_values=tuple(args.n), c_l=args.cl, trials=args.trials,
        base_seed=args.seed, slot_duration=args.slot_duration,
        allow_infinite=args.allow_infinite)
    rows = sweep.run_sweep(spec, jobs=args.jobs)
    if args.format == "json":
        _emit(sweep.to_json(rows, spec.slot_duration), args.out)
    else:
        _emit(sweep.to_csv(rows), args.out)
    return EXIT_OK


def cmd_ccr(args) -> int:
    rows = sweep.load_dataset(args.dataset)
    for metric in args.metric:
        print(f"{metric}: CCR = {sweep.dataset_ccr(rows, metric):.4f}%")
    return EXIT_OK


def cmd_plan(args) -> int:
    c_l = args.cl if args.cl_range is None else _int_list(args.cl_range)
    req = planner.PlanRequest(args.budget, args.n, c_l, args.objective, args.prefer_smaller_cl)
    res = planner.plan(req)
    d = dataclasses.asdict(res)
    if args.format == "json":
        print(json.dumps(d, indent=2))
    else:
        print("\n".join(f"{k}={v}" for k, v in d.items()))
    return EXIT_OK


def cmd_frame(args) -> int:
    if args.action == "encode":
        try:
            obj = json.loads(args.payload)
            f = frame.SensorFrame.from_json(obj)
        except (ValueError, KeyError) as exc:
            if isinstance(exc, FrameError):
                raise
            raise UsageError(f"bad frame JSON: {exc}")
        print(frame.encode(f).hex())
    else:
        try:
            raw = bytes.fromhex(args.payload.replace(" ", ""))
        except ValueError as exc:
            raise UsageError(f"bad hex payload: {exc}")
        print(json.dumps(frame.decode(raw).to_json()))
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    trials = _env("TRIALS", 10_000, int)
    seed = _env("SEED", 2024, int)
    slot = _env("SLOT_DURATION", 1.0, float)
    jobs = _env("JOBS", 1, int)

    p = _Parser(prog="tpmsdelay", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="closed-form delay analysis of one configuration")
    a.add_argument("--cl", type=int, required=True, help="sensor duty-cycle length C_L (slots)")
    a.add_argument("--w", type=int, default=1, help="gateway wake slots per cycle")
    a.add_argument("--s", type=int, required=True, help="gateway sleep slots per cycle")
    a.add_argument("--n", type=int, default=1, help="number of sensors")
    a.add_argument("--slot-duration", type=float, default=slot)
    a.add_argument("--format", choices=("text", "json"), default="text")
    a.add_argument("--out")
    a.set_defaults(func=cmd_analyze)

    v = sub.add_parser("verify", help="brute-force oracle vs closed forms")
    v.add_argument("--max-cl", type=int, default=64)
    v.add_argument("--inject-fault", action="store_true",
                   help="perturb W_delay by one slot to prove mismatches are caught")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="analytic vs Monte Carlo sweep over (S, N)")
    s.add_argument("--cl", type=int, default=32)
    s.add_argument("--s", type=_int_list, default=[2, 6, 30], help="e.g. 2,6,30")
    s.add_argument("--n", type=_int_list, default=list(range(4, 33, 4)), help="e.g. 4:32:4")
    s.add_argument("--trials", type=int, default=trials)
    s.add_argument("--seed", type=int, default=seed)
    s.add_argument("--slot-duration", type=float, default=slot)
    s.add_argument("--jobs", type=int, default=jobs)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.add_argument("--allow-infinite", action="store_true")
    s.set_defaults(func=cmd_sweep)

    c = sub.add_parser("ccr", help="cumulative correctness rate of a sweep dataset")
    c.add_argument("dataset")
    c.add_argument("--metric", action="append", choices=sorted(sweep.METRICS))
    c.set_defaults(func=cmd_ccr)

    pl = sub.add_parser("plan", help="largest sleep length meeting a delay budget")
    pl.add_argument("--budget", type=float, required=True, help="delay budget in slots")
    pl.add_argument("--n", type=int, default=1)
    pl.add_argument("--cl", type=int, default=32)
    pl.add_argument("--cl-range", help="candidate C_L values, e.g. 16:64 or 16,32,64")
    pl.add_argument("--objective", choices=planner.OBJECTIVES, default="bound-worst-delay")
    pl.add_argument("--prefer-smaller-cl", action="store_true")
    pl.add_argument("--format", choices=("text", "json"), default="text")
    pl.set_defaults(func=cmd_plan)

    f = sub.add_parser("frame", help="encode/decode the 10-byte sensor frame")
    f.add_argument("action", choices=("encode", "decode"))
    f.add_argument("payload", help="frame JSON (encode) or hex bytes (decode)")
    f.set_defaults(func=cmd_frame)
    return p


def main(argv=None) -> int:
    try:
        parser = build_parser()
        try:
            args = parser.parse_args(argv)
        except SystemExit as exc:  # --help or a usage error
            return exc.code if isinstance(exc.code, int) else EXIT_USAGE
        if getattr(args, "metric", "unset") is None:
            args.metric = ["worst", "avg"]
        return args.func(args)
    except NotFiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_FINITE
    except (UsageError, TpmsDelayError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
