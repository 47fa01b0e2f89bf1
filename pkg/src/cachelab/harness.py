"""Experiment orchestration: run policies over a trace, attach the offline
optimum and reference bounds, stream covering work into the invariant
checker, and emit canonical JSON / CSV reports.

Determinism contract: (spec, seed) fully determine every output byte.
Randomized policies draw from counter-based child streams keyed by
(seed, policy name, trial index).
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import bounds as bounds_mod
from .checker import check_run
from .cilp import CilpPolicy
from .meta import MetaPolicy
from .model import CostModel, ProblemParams, Trace, validate_trace
from .oracle import InstanceTooLarge, opt
from .policies import is_randomized, make_policy, needs_unbounded_cache
from .rng import CounterRng
from .runner import RunResult, run_policy


class InvariantViolation(Exception):
    pass


@dataclass
class ExperimentSpec:
    trace: Trace
    params: ProblemParams
    policies: list[str]
    trials: int = 1
    seed: int = 0
    check_invariants: bool = True
    bound_problem: str | None = None  # Table row for ratio margin, if any


# Policy-name prefix -> reference-table row.
_BOUND_ROWS = {
    "rental-paging-cilp": "rental-paging",
    "rental-caching-cilp": "rental-caching",
    "zapping-paging-cilp": "paging-zapping",
    "zapping-caching-cilp": "weighted-paging-zapping",
    "rental-zapping-paging-cilp": "rental-zapping-paging",
    "rental-zapping-caching-cilp": "rental-zapping-caching",
}


def bound_row_for(policy_name: str, params: ProblemParams) -> str | None:
    base = policy_name.split(":gamma=")[0]
    row = _BOUND_ROWS.get(base)
    if row == "rental-caching" and params.model == CostModel.FAULT:
        row = "rental-caching-fault"
    if row == "rental-zapping-caching" and params.model == CostModel.FAULT:
        row = "rental-zapping-caching-fault"
    return row


def run_one(
    name: str,
    trace: Trace,
    params: ProblemParams,
    seed: int = 0,
    trial: int = 0,
) -> RunResult:
    rng = CounterRng(seed, "policy", name, trial)
    policy = make_policy(name, rng)
    return run_policy(trace, params, policy, unbounded=needs_unbounded_cache(policy))


def run_experiment(spec: ExperimentSpec) -> dict:
    issues = validate_trace(spec.trace, spec.params)
    errors = [i.message for i in issues if i.level == "error"]
    if errors:
        raise ValueError("invalid trace: " + "; ".join(errors))

    oracle_solution = None
    oracle_note = None
    try:
        oracle_solution = opt(spec.trace, spec.params)
    except InstanceTooLarge as exc:
        oracle_note = f"oracle skipped: {exc}"

    slack = spec.trace.first_load_cost()
    report: dict = {
        "seed": spec.seed,
        "trials": spec.trials,
        "n_steps": spec.trace.n_steps,
        "n_files": len(spec.trace.catalog),
        "params": {
            "k": spec.params.k,
            "lambda": str(spec.params.lam),
            "zap_cost": None if spec.params.zap_cost is None else str(spec.params.zap_cost),
            "model": spec.params.model.value,
        },
        "opt": None if oracle_solution is None else str(oracle_solution.cost),
        "opt_provenance": "oracle" if oracle_solution is not None else oracle_note,
        "first_load_slack": str(slack),
        "warnings": [i.message for i in issues if i.level == "warning"],
        "policies": {},
    }

    for name in spec.policies:
        trials = spec.trials if is_randomized(name) else 1
        if spec.trials > 1 and trials == 1:
            report["warnings"].append(f"{name}: deterministic, trials>1 ignored")
        totals = []
        entry: dict = {"trials": trials}
        for trial in range(trials):
            result = run_one(name, spec.trace, spec.params, spec.seed, trial)
            totals.append(result.ledger.total)
            if trial == 0:
                entry["ledger"] = result.ledger.as_dict()
            if (
                spec.check_invariants
                and oracle_solution is not None
                and isinstance(result.policy, CilpPolicy)
            ):
                check = check_run(
                    result.work_log,
                    oracle_solution.reference(),
                    oracle_solution.lp_objective,
                    gamma=result.policy.gamma,
                    zapping=result.policy.zapping,
                )
                entry["invariants"] = {
                    "checked": check.checked,
                    "cache_size_work": check.cache_size_work,
                    "reference_infeasible": check.infeasible_reference,
                }
                if not check.ok:
                    raise InvariantViolation(
                        f"{name}: " + "; ".join(v.message for v in check.violations)
                    )
        mean = sum(totals, Fraction(0)) / len(totals)
        entry["mean_total"] = str(mean)
        if oracle_solution is not None and oracle_solution.cost > 0:
            entry["ratio"] = str(mean / oracle_solution.cost)
        row = spec.bound_problem or bound_row_for(name, spec.params)
        if row is not None:
            table = bounds_mod.bounds(
                row, "deterministic", spec.params.k, spec.params.lam, spec.params.zap_cost
            )
            entry["bound_row"] = row
            entry["bound_upper"] = None if table["upper"] is None else str(table["upper"])
            if table["upper"] is not None and oracle_solution is not None:
                budget = table["upper"] * oracle_solution.cost + slack
                entry["bound_margin"] = str(budget - mean)
                entry["within_bound"] = mean <= budget
        report["policies"][name] = entry
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_csv(report: dict) -> str:
    out = io.StringIO()
    cols = [
        "policy",
        "trials",
        "mean_total",
        "ratio",
        "bound_row",
        "bound_upper",
        "within_bound",
    ]
    out.write(",".join(cols) + "\n")
    for name in sorted(report["policies"]):
        entry = report["policies"][name]
        row = [name] + [str(entry.get(c, "")) for c in cols[1:]]
        out.write(",".join(row) + "\n")
    return out.getvalue()
