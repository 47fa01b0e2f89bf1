"""Ski-rental strategies and the infinite-cache rental policy built on them.

A cached file's idle run is a ski season: renting costs the per-step rental
rate, buying costs the eviction (= re-retrieval) price.  The deterministic
strategy buys at the break-even step; the randomized one draws its buy step
from the classical geometric-weight distribution over 1..B, B = ceil(buy/rent).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .model import CacheView, Event, PolicyDecision, ProblemParams
from .rng import CounterRng


def break_even_threshold(rent: Fraction, buy: Fraction) -> int:
    """First step index at which cumulative rent would reach the buy price.

    Ties buy; a buy price of zero evicts at the first opportunity.
    """
    if rent <= 0:
        raise ValueError("rent must be > 0")
    return max(1, math.ceil(buy / rent))


def buy_day_weights(b: int) -> list[Fraction]:
    """Unnormalized randomized ski-rental weights (1 - 1/B)^(B - i), i = 1..B."""
    if b < 1:
        raise ValueError("B must be >= 1")
    base = Fraction(b - 1, b)
    return [base ** (b - i) for i in range(1, b + 1)]


def draw_threshold(rng: CounterRng, rent: Fraction, buy: Fraction) -> int:
    b = break_even_threshold(rent, buy)
    weights = buy_day_weights(b)
    total = sum(weights)
    u = rng.fraction() * total
    acc = Fraction(0)
    for i, w in enumerate(weights, start=1):
        acc += w
        if u < acc:
            return i
    return b


def strategy_cost(threshold: int, rent: Fraction, buy: Fraction, season: int) -> Fraction:
    """Total spend when the season lasts `season` steps and we buy at `threshold`."""
    if season < threshold:
        return rent * season
    return rent * (threshold - 1) + buy


def ski_opt(rent: Fraction, buy: Fraction, season: int) -> Fraction:
    return min(rent * season, buy)


@dataclass(frozen=True)
class SkiRentalStrategy:
    """Per-phase instance: buy (evict) once the phase reaches `threshold` steps."""

    threshold: int

    def should_buy(self, step_index: int) -> bool:
        return step_index >= self.threshold


class AlgInfinity:
    """Per-file ski rental on an unbounded cache.

    A phase starts when a file is requested and ends just before its next
    request; ski decisions run from the first post-arrival step.  With
    `capacity_k` set, the same rule is used as a capacity-k rental paging
    policy (valid when lam >= 1/k) and the bound is asserted every step.
    """

    def __init__(self, randomized: bool = False, rng: CounterRng | None = None,
                 capacity_bounded: bool = False):
        if randomized and rng is None:
            raise ValueError("randomized strategy needs an rng")
        self.randomized = randomized
        self.rng = rng
        self.capacity_bounded = capacity_bounded

    def start(self, catalog, params: ProblemParams) -> None:
        if params.lam <= 0:
            raise ValueError("ski-rental policies require a positive rental rate")
        if self.capacity_bounded and params.lam * params.k < 1:
            raise ValueError("capacity-bounded mode requires lam >= 1/k")
        self.catalog = catalog
        self.params = params
        self.mirror: set[str] = set()
        self.phase_start: dict[str, int] = {}
        self.strategy: dict[str, SkiRentalStrategy] = {}

    def _new_strategy(self, fid: str, t: int) -> SkiRentalStrategy:
        rent = self.params.lam
        buy = self.catalog[fid].cost
        if self.randomized:
            return SkiRentalStrategy(draw_threshold(self.rng.child("ski", fid, t), rent, buy))
        return SkiRentalStrategy(break_even_threshold(rent, buy))

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        assert view.resident == frozenset(self.mirror), "policy mirror out of sync"
        requested = event.file
        evictions = []
        for fid in sorted(self.mirror):
            if fid == requested:
                continue  # arrival ends the season before any buy decision
            idle = t - self.phase_start[fid]
            if idle >= 1 and self.strategy[fid].should_buy(idle):
                evictions.append(fid)
        for fid in evictions:
            self.mirror.discard(fid)
            del self.phase_start[fid]
            del self.strategy[fid]
        if requested is not None:
            self.mirror.add(requested)
            self.phase_start[requested] = t
            self.strategy[requested] = self._new_strategy(requested, t)
        if self.capacity_bounded:
            size = sum(self.catalog[f].size for f in self.mirror)
            if size > self.params.k:
                raise AssertionError(
                    f"capacity-bounded ski policy exceeded k={self.params.k}"
                )
        return PolicyDecision(evictions=tuple(evictions))


def alg_infinity(randomized: bool = False, rng: CounterRng | None = None) -> AlgInfinity:
    return AlgInfinity(randomized, rng)


def high_rent_paging(randomized: bool = False, rng: CounterRng | None = None) -> AlgInfinity:
    return AlgInfinity(randomized, rng, capacity_bounded=True)
