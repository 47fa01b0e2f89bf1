"""Classical policies: LRU, FIFO, FWF, (Randomized)Marking, Landlord, ZapFirst,
and the idle-eviction wrapper A_d.

All of them are rent-oblivious (the ledger still charges rent on residency);
A_d adds the rent-bounding idle eviction rule on top of a conservative or
marking policy.
"""

from __future__ import annotations

from fractions import Fraction

from .model import CacheView, Event, PolicyDecision, ProblemParams
from .rng import CounterRng


class _UnitSizePolicy:
    """Shared plumbing for the unit-size paging baselines."""

    def start(self, catalog, params: ProblemParams) -> None:
        for spec in catalog.values():
            if spec.size != 1:
                raise ValueError(f"{type(self).__name__} requires unit-size files")
        self.catalog = catalog
        self.params = params
        self.mirror: set[str] = set()
        self._setup()

    def _setup(self) -> None:
        pass

    def notify_evicted(self, fids) -> None:
        """External eviction hook used by the A_d wrapper."""
        for fid in fids:
            self.mirror.discard(fid)
            self._drop(fid)

    def _drop(self, fid: str) -> None:
        pass


class Lru(_UnitSizePolicy):
    def _setup(self):
        self.stamp: dict[str, int] = {}

    def _drop(self, fid):
        self.stamp.pop(fid, None)

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        evictions = ()
        if event.is_request:
            fid = event.file
            if fid in view.zapped:
                return PolicyDecision()
            if fid not in self.mirror and len(self.mirror) >= self.params.k:
                victim = min(self.mirror, key=lambda g: (self.stamp[g], g))
                evictions = (victim,)
                self.notify_evicted(evictions)
            self.mirror.add(fid)
            self.stamp[fid] = t
        return PolicyDecision(evictions=evictions)


class Fifo(_UnitSizePolicy):
    def _setup(self):
        self.queue: list[str] = []

    def _drop(self, fid):
        if fid in self.queue:
            self.queue.remove(fid)

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        evictions = ()
        if event.is_request:
            fid = event.file
            if fid in view.zapped:
                return PolicyDecision()
            if fid not in self.mirror:
                if len(self.mirror) >= self.params.k:
                    victim = self.queue[0]
                    evictions = (victim,)
                    self.notify_evicted(evictions)
                self.mirror.add(fid)
                self.queue.append(fid)
        return PolicyDecision(evictions=evictions)


class Fwf(_UnitSizePolicy):
    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        evictions = ()
        if event.is_request:
            fid = event.file
            if fid in view.zapped:
                return PolicyDecision()
            if fid not in self.mirror and len(self.mirror) >= self.params.k:
                evictions = tuple(sorted(self.mirror))
                self.notify_evicted(evictions)
            self.mirror.add(fid)
        return PolicyDecision(evictions=evictions)


class Marking(_UnitSizePolicy):
    """Marks on request; evicts an unmarked page, unmarking all at phase end.

    Deterministic flavor evicts the smallest unmarked id; the randomized
    flavor picks uniformly among unmarked pages.
    """

    def __init__(self, randomized: bool = False, rng: CounterRng | None = None):
        if randomized and rng is None:
            raise ValueError("randomized marking needs an rng")
        self.randomized = randomized
        self.rng = rng

    def _setup(self):
        self.marked: set[str] = set()

    def _drop(self, fid):
        self.marked.discard(fid)

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        evictions = ()
        if event.is_request:
            fid = event.file
            if fid in view.zapped:
                return PolicyDecision()
            if fid not in self.mirror and len(self.mirror) >= self.params.k:
                unmarked = sorted(self.mirror - self.marked)
                if not unmarked:  # phase ends: fault with everything marked
                    self.marked.clear()
                    unmarked = sorted(self.mirror)
                if self.randomized:
                    victim = self.rng.child("evict", t).choice(unmarked)
                else:
                    victim = unmarked[0]
                evictions = (victim,)
                self.notify_evicted(evictions)
            self.mirror.add(fid)
            self.marked.add(fid)
        return PolicyDecision(evictions=evictions)


class Landlord:
    """Credit-based file caching: deduct rent proportional to size under
    pressure, evict zero-credit files, refresh credit to cost on access."""

    def start(self, catalog, params: ProblemParams) -> None:
        self.catalog = catalog
        self.params = params
        self.mirror: set[str] = set()
        self.credit: dict[str, Fraction] = {}

    def notify_evicted(self, fids) -> None:
        for fid in fids:
            self.mirror.discard(fid)
            self.credit.pop(fid, None)

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        evictions: list[str] = []
        if event.is_request:
            fid = event.file
            if fid in view.zapped:
                return PolicyDecision()
            if fid not in self.mirror:
                need = self.catalog[fid].size
                while sum(self.catalog[g].size for g in self.mirror) + need > self.params.k:
                    delta = min(
                        self.credit[g] / self.catalog[g].size for g in self.mirror
                    )
                    for g in self.mirror:
                        self.credit[g] -= delta * self.catalog[g].size
                    broke = sorted(g for g in self.mirror if self.credit[g] == 0)
                    for g in broke:
                        if sum(self.catalog[h].size for h in self.mirror) + need <= self.params.k:
                            break
                        evictions.append(g)
                        self.notify_evicted((g,))
                self.mirror.add(fid)
            self.credit[fid] = self.catalog[fid].cost
        return PolicyDecision(evictions=tuple(evictions))


class ZapFirst:
    """Zaps every file at its first request; never caches anything."""

    def start(self, catalog, params: ProblemParams) -> None:
        if not params.zapping_enabled:
            raise ValueError("zap-first requires zapping")
        self.zapped: set[str] = set()

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        if event.is_request and event.file not in self.zapped:
            self.zapped.add(event.file)
            return PolicyDecision(zaps=(event.file,))
        return PolicyDecision()


class IdleEvict:
    """A_d: run a conservative/marking policy, additionally evicting any file
    that has gone d steps (ticks included) without a request."""

    def __init__(self, inner, d: int):
        if d < 1:
            raise ValueError("d must be >= 1")
        self.inner = inner
        self.d = d

    def start(self, catalog, params: ProblemParams) -> None:
        self.inner.start(catalog, params)
        self.last_seen: dict[str, int] = {}

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        idle = tuple(
            sorted(
                fid
                for fid in view.resident
                if event.file != fid and t - self.last_seen.get(fid, t) >= self.d
            )
        )
        if idle:
            self.inner.notify_evicted(idle)
        inner_view = CacheView(view.resident - set(idle), view.zapped)
        decision = self.inner.step(t, event, inner_view)
        if event.is_request:
            self.last_seen[event.file] = t
        return PolicyDecision(
            evictions=idle + decision.evictions,
            zaps=decision.zaps,
            evictions_after=decision.evictions_after,
            zaps_after=decision.zaps_after,
        )
