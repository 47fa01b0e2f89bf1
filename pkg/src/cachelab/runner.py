"""Single-run simulation loop shared by the harness, adversaries, and tests."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Protocol

from .model import (
    CacheState,
    CacheView,
    CostLedger,
    Event,
    LedgerDelta,
    PolicyDecision,
    ProblemParams,
    Trace,
    advance_step,
)


class Policy(Protocol):
    def start(self, catalog, params: ProblemParams) -> None: ...

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision: ...


@dataclass(frozen=True)
class StepRecord:
    t: int
    event: Event
    decision: PolicyDecision
    delta: LedgerDelta


@dataclass
class RunResult:
    ledger: CostLedger
    steps: list[StepRecord] = field(default_factory=list)
    work_log: list = field(default_factory=list)  # CILP WorkRecord entries, if any
    policy: object = None

    def replay_total(self) -> Fraction:
        total = Fraction(0)
        for rec in self.steps:
            total += rec.delta.total
        return total


def run_policy(
    trace: Trace,
    params: ProblemParams,
    policy,
    unbounded: bool = False,
) -> RunResult:
    """Drive a policy over a trace; the runner owns the authoritative cache."""
    state = CacheState(trace.catalog, None if unbounded else params.k)
    ledger = CostLedger()
    result = RunResult(ledger)
    policy.start(trace.catalog, params)
    for t, event in enumerate(trace.events, start=1):
        decision = policy.step(t, event, state.view())
        state, delta = advance_step(state, event, params, decision)
        ledger.add(delta)
        result.steps.append(StepRecord(t, event, decision, delta))
    result.work_log = list(getattr(policy, "work_log", []))
    result.policy = policy
    return result
