"""Core data model: files, traces, problem parameters, cache state, cost accounting.

All costs are exact rationals (fractions.Fraction); nothing here ever touches
floats, so ledgers re-sum bit-for-bit and covering floor thresholds are exact.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping


class SimulationError(Exception):
    """Base for per-step simulation contract violations."""


class CapacityError(SimulationError):
    pass


class EvictionError(SimulationError):
    pass


class ZappingError(SimulationError):
    """Zap issued while zapping is disabled, or a file zapped twice."""


def parse_rational(text: str) -> Fraction:
    """Parse 'p/q' or a decimal string into an exact Fraction."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad rational {text!r}: {exc}") from None


def fmt_rational(value: Fraction) -> str:
    return str(value)


class CostModel(enum.Enum):
    PAGING = "paging"
    WEIGHTED_PAGING = "weighted-paging"
    BIT = "bit"
    FAULT = "fault"
    GENERAL = "general"


@dataclass(frozen=True)
class FileSpec:
    id: str
    size: int = 1
    cost: Fraction = Fraction(1)

    def __post_init__(self):
        if self.size < 1:
            raise ValueError(f"file {self.id}: size must be >= 1")
        if self.cost < 0:
            raise ValueError(f"file {self.id}: cost must be >= 0")


@dataclass(frozen=True)
class Event:
    """A single time step: a request to a file, or an empty step (tick)."""

    file: str | None = None

    @property
    def is_request(self) -> bool:
        return self.file is not None


TICK = Event(None)


def req(fid: str) -> Event:
    return Event(fid)


@dataclass(frozen=True)
class Trace:
    catalog: Mapping[str, FileSpec]
    events: tuple[Event, ...]

    @property
    def n_steps(self) -> int:
        return len(self.events)

    def next_request(self, t: int) -> int:
        """Time of the next request to the file requested at step t.

        Steps are 1-based.  Returns n_steps + 1 when there is no later request,
        so the rent window for step t is always t <= s < next_request(t).
        """
        ev = self.events[t - 1]
        if not ev.is_request:
            raise ValueError(f"step {t} is not a request")
        for s in range(t + 1, self.n_steps + 1):
            later = self.events[s - 1]
            if later.is_request and later.file == ev.file:
                return s
        return self.n_steps + 1

    def request_steps(self) -> list[int]:
        return [t for t, ev in enumerate(self.events, start=1) if ev.is_request]

    def distinct_files(self) -> list[str]:
        seen: dict[str, None] = {}
        for ev in self.events:
            if ev.is_request:
                seen.setdefault(ev.file, None)
        return list(seen)

    def first_load_cost(self) -> Fraction:
        """Sum of retrieval costs over distinct requested files.

        This is the additive slack used when comparing a policy ledger against
        the offline optimum: initial loads are unavoidable and the covering
        objective does not account for them.
        """
        return sum(
            (self.catalog[f].cost for f in self.distinct_files()), Fraction(0)
        )


@dataclass(frozen=True)
class ProblemParams:
    k: int
    lam: Fraction = Fraction(0)
    zap_cost: Fraction | None = None
    model: CostModel = CostModel.GENERAL
    rent_by_size: bool = False  # optional mode: rent lambda*size(f) per step

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("cache size k must be >= 1")
        if self.lam < 0:
            raise ValueError("rental rate must be >= 0")
        if self.zap_cost is not None and self.zap_cost < 1:
            raise ValueError("zap cost must be >= 1")

    @property
    def zapping_enabled(self) -> bool:
        return self.zap_cost is not None


@dataclass(frozen=True)
class CacheView:
    """Read-only snapshot handed to policies and adversaries."""

    resident: frozenset[str]
    zapped: frozenset[str]


@dataclass(frozen=True)
class PolicyDecision:
    """Actions for one step.

    Pre-serve actions are applied before the event is served (evictions free
    space, a zap of the requested file serves it from the zap cache with no
    retrieval).  Post-serve actions apply after admission, within the same
    step: a file evicted or zapped post-serve pays its retrieval but no rent.
    """

    evictions: tuple[str, ...] = ()
    zaps: tuple[str, ...] = ()
    evictions_after: tuple[str, ...] = ()
    zaps_after: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.evictions or self.zaps or self.evictions_after or self.zaps_after)


NO_DECISION = PolicyDecision()


@dataclass
class CacheState:
    catalog: Mapping[str, FileSpec]
    k: int | None  # None = unbounded (infinite cache)
    resident: set[str] = field(default_factory=set)
    zapped: set[str] = field(default_factory=set)

    def resident_size(self) -> int:
        return sum(self.catalog[f].size for f in self.resident)

    def view(self) -> CacheView:
        return CacheView(frozenset(self.resident), frozenset(self.zapped))

    def copy(self) -> "CacheState":
        new = CacheState(self.catalog, self.k)
        new.resident = set(self.resident)
        new.zapped = set(self.zapped)
        return new


@dataclass(frozen=True)
class LedgerDelta:
    retrieval: Fraction = Fraction(0)
    rental: Fraction = Fraction(0)
    zapping: Fraction = Fraction(0)

    @property
    def total(self) -> Fraction:
        return self.retrieval + self.rental + self.zapping


@dataclass
class CostLedger:
    retrieval: Fraction = Fraction(0)
    rental: Fraction = Fraction(0)
    zapping: Fraction = Fraction(0)

    @property
    def total(self) -> Fraction:
        return self.retrieval + self.rental + self.zapping

    def add(self, delta: LedgerDelta) -> None:
        self.retrieval += delta.retrieval
        self.rental += delta.rental
        self.zapping += delta.zapping

    def as_dict(self) -> dict[str, str]:
        return {
            "retrieval": str(self.retrieval),
            "rental": str(self.rental),
            "zapping": str(self.zapping),
            "total": str(self.total),
        }


def _apply_evictions(state: CacheState, fids: Iterable[str]) -> None:
    for fid in fids:
        if fid not in state.resident:
            raise EvictionError(f"eviction of non-resident file {fid!r}")
        state.resident.discard(fid)


def _apply_zaps(state: CacheState, fids: Iterable[str], params: ProblemParams) -> Fraction:
    charged = Fraction(0)
    for fid in fids:
        if not params.zapping_enabled:
            raise ZappingError(f"zap of {fid!r} while zapping is disabled")
        if fid in state.zapped:
            raise ZappingError(f"file {fid!r} zapped twice")
        state.zapped.add(fid)
        state.resident.discard(fid)
        charged += params.zap_cost
    return charged


def advance_step(
    state: CacheState,
    event: Event,
    params: ProblemParams,
    decision: PolicyDecision = NO_DECISION,
) -> tuple[CacheState, LedgerDelta]:
    """Apply one step's decision and event to the cache, returning cost deltas.

    Charges: retrieval cost(f) iff the requested file was neither resident nor
    zapped when served; zap cost per newly zapped file; rent per file resident
    at the end of the step (arrival steps pay rent, the eviction step does not).
    Requests to zapped files are free.
    """
    retrieval = Fraction(0)
    zapping = Fraction(0)

    _apply_evictions(state, decision.evictions)
    zapping += _apply_zaps(state, decision.zaps, params)

    if event.is_request:
        fid = event.file
        if fid not in state.catalog:
            raise SimulationError(f"request to unknown file {fid!r}")
        if fid in state.zapped or fid in state.resident:
            pass  # free hit (zap cache or primary cache)
        else:
            retrieval += state.catalog[fid].cost
            state.resident.add(fid)
            if state.k is not None and state.resident_size() > state.k:
                raise CapacityError(
                    f"admitting {fid!r} overflows cache "
                    f"({state.resident_size()} > {state.k})"
                )

    _apply_evictions(state, decision.evictions_after)
    zapping += _apply_zaps(state, decision.zaps_after, params)

    if params.rent_by_size:
        rental = params.lam * state.resident_size()
    else:
        rental = params.lam * len(state.resident)
    return state, LedgerDelta(retrieval, rental, zapping)


@dataclass(frozen=True)
class Issue:
    level: str  # "error" | "warning"
    message: str


def validate_trace(trace: Trace, params: ProblemParams) -> list[Issue]:
    """Static checks; returns issues instead of raising."""
    issues: list[Issue] = []
    for ev in trace.events:
        if ev.is_request and ev.file not in trace.catalog:
            issues.append(Issue("error", f"request to unknown file {ev.file!r}"))
    for spec in trace.catalog.values():
        if params.model in (CostModel.PAGING, CostModel.WEIGHTED_PAGING) and spec.size != 1:
            issues.append(Issue("error", f"file {spec.id!r}: model requires size 1"))
        if params.model == CostModel.PAGING and spec.cost != 1:
            issues.append(Issue("error", f"file {spec.id!r}: paging requires cost 1"))
        if params.model == CostModel.FAULT and spec.cost != 1:
            issues.append(Issue("error", f"file {spec.id!r}: fault model requires cost 1"))
        if params.model == CostModel.BIT and spec.cost != spec.size:
            issues.append(Issue("error", f"file {spec.id!r}: bit model requires cost = size"))
        if spec.size > params.k:
            issues.append(
                Issue("warning", f"file {spec.id!r} is uncacheable (size {spec.size} > k={params.k})")
            )
    return issues
