"""Parallel composition: a capacity-k caching (or zapping-caching) policy and
the infinite-cache ski-rental policy run side by side on the same events; the
real cache is the intersection of their contents, and zaps mirror the inner
policy's.

Both components are full simulations with their own states and ledgers, so
the cost-domination audit (meta <= inner + infinite, component-wise) compares
three well-defined runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import (
    CacheState,
    CacheView,
    CostLedger,
    Event,
    PolicyDecision,
    ProblemParams,
    advance_step,
)


@dataclass
class _Component:
    policy: object
    state: CacheState
    ledger: CostLedger = field(default_factory=CostLedger)


class MetaPolicy:
    def __init__(self, inner, infinite):
        self.inner_policy = inner
        self.infinite_policy = infinite

    def start(self, catalog, params: ProblemParams) -> None:
        self.params = params
        self.inner_policy.start(catalog, params)
        self.infinite_policy.start(catalog, params)
        self.inner = _Component(self.inner_policy, CacheState(catalog, params.k))
        self.infinite = _Component(self.infinite_policy, CacheState(catalog, None))
        self.catalog = catalog

    def _advance(self, comp: _Component, t: int, event: Event) -> None:
        decision = comp.policy.step(t, event, comp.state.view())
        _, delta = advance_step(comp.state, event, self.params, decision)
        comp.ledger.add(delta)

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        self._advance(self.inner, t, event)
        self._advance(self.infinite, t, event)
        target_real = self.inner.state.resident & self.infinite.state.resident
        new_zaps = set(self.inner.state.zapped - view.zapped)
        requested = event.file
        leaving = view.resident - target_real - new_zaps - {requested}
        # A requested file not in the target intersection ends the step
        # resident anyway (hit or reload); it leaves after serving, so a hit
        # is not turned into a phantom reload.
        ev_after = ()
        if (
            requested is not None
            and requested not in target_real
            and requested not in new_zaps
            and requested not in view.zapped
        ):
            ev_after = (requested,)
        real_size = sum(self.catalog[f].size for f in target_real)
        assert real_size <= self.params.k, "meta intersection exceeded k"
        return PolicyDecision(
            evictions=tuple(sorted(leaving)),
            zaps=tuple(sorted(new_zaps)),
            evictions_after=ev_after,
        )

    @property
    def component_ledgers(self) -> tuple[CostLedger, CostLedger]:
        return self.inner.ledger, self.infinite.ledger
