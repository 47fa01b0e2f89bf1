"""Command-line interface.

Verbs: run (policies over a trace, ratio report), opt (offline optimum),
adversary (lower-bound trace generators), bounds (reference table), gen
(random trace).  Exit codes: 0 success, 1 usage error, 2 invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from . import adversary as adv
from . import bounds as bounds_mod
from .harness import ExperimentSpec, InvariantViolation, report_csv, report_json, run_experiment
from .model import CostModel, ProblemParams, parse_rational
from .oracle import opt
from .policies import make_policy
from .rng import CounterRng
from .traceio import emit_trace, generate_trace, parse_trace


class UsageError(Exception):
    pass


def _params_from_args(args) -> ProblemParams:
    return ProblemParams(
        k=args.k,
        lam=parse_rational(args.lam) if args.lam else Fraction(0),
        zap_cost=parse_rational(args.zap_cost) if args.zap_cost else None,
        model=CostModel(args.model),
    )


def _load_trace(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_trace(fh.read())


def _default_seed(args) -> int:
    if args.seed is not None:
        return args.seed
    return int(os.environ.get("CACHELAB_SEED", "0"))


def cmd_run(args) -> int:
    trace = _load_trace(args.trace)
    spec = ExperimentSpec(
        trace=trace,
        params=_params_from_args(args),
        policies=args.policy,
        trials=args.trials,
        seed=_default_seed(args),
        check_invariants=not args.no_invariants,
    )
    try:
        report = run_experiment(spec)
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 2
    text = report_csv(report) if args.format == "csv" else report_json(report)
    _write_out(args.output, text)
    return 0


def cmd_opt(args) -> int:
    trace = _load_trace(args.trace)
    solution = opt(trace, _params_from_args(args))
    payload = {
        "cost": str(solution.cost),
        "ledger": solution.ledger.as_dict(),
        "lp_objective": str(solution.lp_objective),
        "lp_assignment": {k: str(v) for k, v in sorted(solution.lp_assignment.items())},
        "schedule": [
            {"evictions": list(s.evictions), "zap_requested": s.zap_requested}
            for s in solution.schedule
        ],
    }
    _write_out(args.output, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_adversary(args) -> int:
    seed = _default_seed(args)
    if args.variant == "rental-det":
        policy = make_policy(args.target, CounterRng(seed, "target"))
        result = adv.rental_det_adversary(
            policy, args.k, parse_rational(args.lam or "0"), args.steps
        )
    elif args.variant == "rental-rand":
        result = adv.rental_rand_adversary(args.k, args.steps, seed)
    elif args.variant == "zapping":
        policy = make_policy(args.target, CounterRng(seed, "target"))
        result = adv.zapping_adversary(
            policy, args.k, parse_rational(args.zap_cost or "1"), args.steps
        )
    else:
        raise UsageError(f"unknown adversary variant {args.variant!r}")
    if args.emit_trace:
        with open(args.emit_trace, "w", encoding="utf-8") as fh:
            fh.write(emit_trace(result.trace))
    payload = {
        "variant": args.variant,
        "target_total": None if result.target_ledger is None else str(result.target_ledger.total),
        "opt_certificate": None if result.opt_certificate is None else str(result.opt_certificate),
        "ratio": None if result.ratio is None else str(result.ratio),
        "details": {k: str(v) for k, v in sorted(result.details.items())},
    }
    _write_out(args.output, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_bounds(args) -> int:
    table = bounds_mod.bounds(
        args.problem,
        args.setting,
        args.k,
        parse_rational(args.lam) if args.lam else None,
        parse_rational(args.zap_cost) if args.zap_cost else None,
    )
    payload = {
        "problem": args.problem,
        "setting": args.setting,
        "k": args.k,
        "lower": None if table["lower"] is None else str(table["lower"]),
        "upper": None if table["upper"] is None else str(table["upper"]),
        "notes": table["notes"],
    }
    _write_out(args.output, json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return 0


def cmd_gen(args) -> int:
    rng = CounterRng(_default_seed(args), "gen")
    trace = generate_trace(
        rng,
        n_files=args.files,
        n_steps=args.steps,
        tick_density=parse_rational(args.tick_density),
        size_range=(args.min_size, args.max_size),
        cost_range=(args.min_cost, args.max_cost),
        bit_model=args.model == "bit",
        fault_model=args.model == "fault",
    )
    _write_out(args.output, emit_trace(trace))
    return 0


def _write_out(path: str | None, text: str) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _add_common(p, with_params=True):
    p.add_argument("--seed", type=int, default=None, help="default: $CACHELAB_SEED or 0")
    p.add_argument("--output", default=None, help="write to file instead of stdout")
    if with_params:
        p.add_argument("--k", type=int, required=True)
        p.add_argument("--lambda", dest="lam", default=None, help="rental rate, p/q or decimal")
        p.add_argument("--zap-cost", default=None)
        p.add_argument(
            "--model",
            default="general",
            choices=[m.value for m in CostModel],
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cachelab")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("run", help="run policies over a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--policy", action="append", required=True)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--no-invariants", action="store_true")
    _add_common(p)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("opt", help="exact offline optimum (small instances)")
    p.add_argument("--trace", required=True)
    _add_common(p)
    p.set_defaults(func=cmd_opt)

    p = sub.add_parser("adversary", help="lower-bound trace generators")
    p.add_argument("--variant", required=True, choices=["rental-det", "rental-rand", "zapping"])
    p.add_argument("--target", default="lru")
    p.add_argument("--steps", type=int, default=10000)
    p.add_argument("--emit-trace", default=None)
    _add_common(p)
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("bounds", help="reference bound table")
    p.add_argument("--problem", required=True, choices=bounds_mod.PROBLEMS)
    p.add_argument("--setting", default="deterministic", choices=bounds_mod.SETTINGS)
    _add_common(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gen", help="seeded random trace")
    p.add_argument("--files", type=int, required=True)
    p.add_argument("--steps", type=int, required=True)
    p.add_argument("--tick-density", default="1/4")
    p.add_argument("--min-size", type=int, default=1)
    p.add_argument("--max-size", type=int, default=1)
    p.add_argument("--min-cost", type=int, default=1)
    p.add_argument("--max-cost", type=int, default=1)
    p.add_argument("--model", default="general", choices=["general", "bit", "fault"])
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors; remap to 1
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
