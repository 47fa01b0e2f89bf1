"""Exact offline optimum for small instances.

Forward dynamic program over (resident set, zapped set) states.  Per step the
schedule may evict any subset of resident files, then serve the event: a
requested file that is neither resident nor zapped is either admitted (paying
its retrieval cost, capacity permitting) or zapped.  Rent is charged per file
resident at the end of the step.

Zaps are enumerated only as the serve action of the zapped file's own request
step.  Zapping a file at any other moment is equivalent to evicting it there
and zapping at its next request (same zap cost, same rent, no retrieval in
between), so this restriction loses no optimality.

The solver also exports the 0/1 covering-LP assignment induced by the optimal
schedule, for potential-function monitoring of the online policies.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    CacheState,
    CostLedger,
    PolicyDecision,
    ProblemParams,
    Trace,
    advance_step,
)

MAX_FILES = 10
MAX_STEPS = 30
MAX_K = 6


class InstanceTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class ScheduleStep:
    evictions: tuple[str, ...] = ()
    zap_requested: bool = False


@dataclass
class OracleSolution:
    cost: Fraction
    ledger: CostLedger
    schedule: tuple[ScheduleStep, ...]
    lp_assignment: dict[str, Fraction]
    lp_objective: Fraction
    lp_coefficients: dict[str, Fraction]

    def reference(self) -> dict[str, tuple[Fraction, Fraction]]:
        return {
            vid: (self.lp_coefficients[vid], value)
            for vid, value in self.lp_assignment.items()
        }


def _check_limits(trace: Trace, params: ProblemParams) -> None:
    if len(trace.catalog) > MAX_FILES:
        raise InstanceTooLarge(f"{len(trace.catalog)} files > {MAX_FILES}")
    if trace.n_steps > MAX_STEPS:
        raise InstanceTooLarge(f"{trace.n_steps} steps > {MAX_STEPS}")
    if params.k > MAX_K:
        raise InstanceTooLarge(f"k={params.k} > {MAX_K}")


def _subsets(items: tuple[str, ...]):
    for r in range(len(items) + 1):
        yield from itertools.combinations(items, r)


def _forward_layers(trace: Trace, params: ProblemParams):
    """One layer per step: state -> (min cost, parent state, action)."""
    sizes = {f: spec.size for f, spec in trace.catalog.items()}
    costs = {f: spec.cost for f, spec in trace.catalog.items()}
    lam = params.lam
    n_zap = params.zap_cost

    def rent(res: frozenset) -> Fraction:
        if lam == 0:
            return Fraction(0)
        units = sum(sizes[f] for f in res) if params.rent_by_size else len(res)
        return lam * units

    start = (frozenset(), frozenset())
    layers: list[dict] = [{start: (Fraction(0), None, None)}]
    for event in trace.events:
        nxt: dict = {}

        def offer(state, cost, prev_state, action):
            best = nxt.get(state)
            if best is None or cost < best[0]:
                nxt[state] = (cost, prev_state, action)

        for (res, zapped), (cost, _, _) in layers[-1].items():
            for ev_subset in _subsets(tuple(sorted(res))):
                res1 = res.difference(ev_subset)
                if event.is_request:
                    fid = event.file
                    if fid in zapped or fid in res1:
                        offer((res1, zapped), cost + rent(res1), (res, zapped), ScheduleStep(ev_subset))
                    else:
                        if sum(sizes[f] for f in res1) + sizes[fid] <= params.k:
                            res2 = res1 | {fid}
                            offer(
                                (res2, zapped),
                                cost + costs[fid] + rent(res2),
                                (res, zapped),
                                ScheduleStep(ev_subset),
                            )
                        if n_zap is not None:
                            offer(
                                (res1, zapped | {fid}),
                                cost + n_zap + rent(res1),
                                (res, zapped),
                                ScheduleStep(ev_subset, zap_requested=True),
                            )
                else:
                    offer((res1, zapped), cost + rent(res1), (res, zapped), ScheduleStep(ev_subset))
        if not nxt:
            raise InstanceTooLarge("no feasible schedule (uncacheable request?)")
        layers.append(nxt)
    return layers


def opt(trace: Trace, params: ProblemParams) -> OracleSolution:
    _check_limits(trace, params)
    layers = _forward_layers(trace, params)
    final = layers[-1]
    state = min(final, key=lambda s: (final[s][0], tuple(sorted(s[0])), tuple(sorted(s[1]))))
    total = final[state][0]

    schedule: list[ScheduleStep] = []
    for idx in range(trace.n_steps, 0, -1):
        _, prev, action = layers[idx][state]
        schedule.append(action)
        state = prev
    schedule.reverse()

    ledger = _replay(trace, params, schedule)
    assert ledger.total == total, "oracle DP disagrees with its replayed ledger"
    assignment, objective, coeffs = _induced_lp(trace, params, schedule)
    return OracleSolution(total, ledger, tuple(schedule), assignment, objective, coeffs)


def _replay(trace: Trace, params: ProblemParams, schedule) -> CostLedger:
    state = CacheState(trace.catalog, params.k)
    ledger = CostLedger()
    for event, action in zip(trace.events, schedule):
        zaps = (event.file,) if action.zap_requested else ()
        decision = PolicyDecision(evictions=action.evictions, zaps=zaps)
        state, delta = advance_step(state, event, params, decision)
        ledger.add(delta)
    return ledger


def _induced_lp(trace: Trace, params: ProblemParams, schedule):
    """0/1 assignment for x_t / y_{t,s} / z_f induced by an offline schedule.

    x@t fires iff the file requested at t left the resident set by eviction
    before its next request; y@t@s is 1 for every step of the window t<=s<t'
    the file stayed resident; z@f is 1 iff the schedule ever zaps f.
    """
    resident_at_end: list[frozenset] = []
    zapped_files: set[str] = set()
    state: set[str] = set()
    evicted_at: dict[int, set[str]] = {}
    for idx, (event, action) in enumerate(zip(trace.events, schedule), start=1):
        evicted_at[idx] = set(action.evictions)
        state.difference_update(action.evictions)
        if event.is_request:
            fid = event.file
            if action.zap_requested:
                zapped_files.add(fid)
            elif fid not in zapped_files and fid not in state:
                state.add(fid)
        resident_at_end.append(frozenset(state))

    assignment: dict[str, Fraction] = {}
    coeffs: dict[str, Fraction] = {}
    lam = params.lam
    for t in trace.request_steps():
        fid = trace.events[t - 1].file
        nxt = trace.next_request(t)
        evicted = any(fid in evicted_at[u] for u in range(t + 1, min(nxt, trace.n_steps) + 1))
        vid = f"x@{t:06d}"
        assignment[vid] = Fraction(1 if evicted else 0)
        coeffs[vid] = trace.catalog[fid].cost
        if lam > 0:
            for s in range(t, min(nxt, trace.n_steps + 1)):
                yid = f"y@{t:06d}@{s:06d}"
                assignment[yid] = Fraction(1 if fid in resident_at_end[s - 1] else 0)
                coeffs[yid] = lam
    if params.zapping_enabled:
        for fid in trace.distinct_files():
            zid = f"z@{fid}"
            assignment[zid] = Fraction(1 if fid in zapped_files else 0)
            coeffs[zid] = params.zap_cost
    objective = sum((coeffs[v] * assignment[v] for v in assignment), Fraction(0))
    return assignment, objective, coeffs


def opt_brute_force(trace: Trace, params: ProblemParams) -> Fraction:
    """Memo-free recursive enumeration over per-step decision sequences.

    Independent check of the DP: costs come from advance_step, state from
    CacheState, no layer merging.  Exponential; keep instances tiny.
    """
    _check_limits(trace, params)
    best = [None]

    def rec(idx: int, state: CacheState, cost: Fraction):
        if best[0] is not None and cost >= best[0]:
            return
        if idx == trace.n_steps:
            best[0] = cost
            return
        event = trace.events[idx]
        options: list[PolicyDecision] = []
        for ev_subset in _subsets(tuple(sorted(state.resident))):
            if event.is_request:
                fid = event.file
                misses = fid not in state.zapped and fid not in (state.resident - set(ev_subset))
                if misses:
                    leftover = sum(
                        trace.catalog[f].size for f in state.resident if f not in ev_subset
                    )
                    if leftover + trace.catalog[fid].size <= params.k:
                        options.append(PolicyDecision(evictions=ev_subset))
                    if params.zapping_enabled:
                        options.append(PolicyDecision(evictions=ev_subset, zaps=(fid,)))
                else:
                    options.append(PolicyDecision(evictions=ev_subset))
            else:
                options.append(PolicyDecision(evictions=ev_subset))
        for decision in options:
            nstate = state.copy()
            nstate, delta = advance_step(nstate, event, params, decision)
            rec(idx + 1, nstate, cost + delta.total)

    rec(0, CacheState(trace.catalog, params.k), Fraction(0))
    if best[0] is None:
        raise InstanceTooLarge("no feasible schedule")
    return best[0]


def opt_lower_bound_sanity(oracle_cost: Fraction, policy_ledgers: dict[str, Fraction]) -> list[str]:
    """OPT must never exceed any policy's ledger; violations indicate bugs."""
    return [
        f"policy {name!r} ledger {value} < OPT {oracle_cost}"
        for name, value in policy_ledgers.items()
        if value < oracle_cost
    ]
