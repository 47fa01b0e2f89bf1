"""Covering-LP policies: constraint generation per variant and the mapping of
fired variables to evictions and zaps.

Variable naming: x@t is the eviction indicator of the file requested at step
t, y@t@s its per-step rent indicator for t <= s < t' (rental variants), z@f
the zap indicator of file f (zapping variants).

Per step, the policy works the rent-evict(-zap) constraints of the files
resident at the start of the step in ascending file id, then (on a miss that
does not fit) one cache-size constraint over the current resident set, then
admits the request; the admitted file's own arrival-step constraint is worked
last.  A fired x evicts, a fired z zaps, a fired y just commits that step's
rent.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .covering import Constraint, CoveringEngine, Term, WorkReport
from .model import CacheView, Event, PolicyDecision, ProblemParams


@dataclass(frozen=True)
class WorkRecord:
    """One worked constraint, with enough detail to replay invariant checks."""

    step: int
    kind: str  # "rent-evict" | "cache-size"
    label: str
    tau: Fraction
    objective_delta: Fraction
    fired: tuple[str, ...]
    n_variables: int
    raises: tuple[tuple[str, Fraction, Fraction, Fraction], ...]
    terms: tuple[Term, ...]
    threshold: Fraction

    def as_json_dict(self) -> dict:
        return {
            "step": self.step,
            "kind": self.kind,
            "label": self.label,
            "tau": str(self.tau),
            "objective_delta": str(self.objective_delta),
            "fired": list(self.fired),
            "n_variables": self.n_variables,
            "threshold": str(self.threshold),
            "terms": [
                {"variables": list(t.variables), "weight": str(t.weight), "cap": t.cap}
                for t in self.terms
            ],
        }


def _x_id(t: int) -> str:
    return f"x@{t:06d}"


def _y_id(t: int, s: int) -> str:
    return f"y@{t:06d}@{s:06d}"


def _z_id(fid: str) -> str:
    return f"z@{fid}"


class CilpPolicy:
    def __init__(
        self,
        rental: bool,
        zapping: bool,
        sized: bool,
        gamma: Fraction | None = None,
    ):
        if gamma is not None and not rental:
            raise ValueError("gamma applies only to rental variants")
        if gamma is not None and gamma <= 0:
            raise ValueError("gamma must be > 0")
        self.rental = rental
        self.zapping = zapping
        self.sized = sized
        self.gamma = gamma

    def start(self, catalog, params: ProblemParams) -> None:
        if self.rental and params.lam <= 0:
            raise ValueError("rental variants require a positive rental rate")
        if self.zapping and not params.zapping_enabled:
            raise ValueError("zapping variant requires a zap cost")
        for spec in catalog.values():
            if spec.cost <= 0:
                raise ValueError(f"file {spec.id!r}: covering policies need cost > 0")
            if not self.sized and (spec.size != 1 or spec.cost != 1):
                raise ValueError(f"file {spec.id!r}: paging variants need size=cost=1")
            if spec.size > params.k:
                raise ValueError(f"file {spec.id!r}: uncacheable (size > k)")
        self.catalog = catalog
        self.params = params
        self.engine = CoveringEngine()
        self.mirror: set[str] = set()
        self.zapped_mirror: set[str] = set()
        self.last_request: dict[str, int] = {}
        self.work_log: list[WorkRecord] = []

    # -- variables ----------------------------------------------------------

    def _x(self, fid: str) -> str:
        vid = _x_id(self.last_request[fid])
        self.engine.register(vid, self.catalog[fid].cost)
        return vid

    def _y(self, fid: str, s: int) -> str:
        vid = _y_id(self.last_request[fid], s)
        self.engine.register(vid, self.params.lam)
        return vid

    def _z(self, fid: str) -> str:
        vid = _z_id(fid)
        self.engine.register(vid, self.params.zap_cost)
        return vid

    # -- constraint work ----------------------------------------------------

    def _work(self, constraint: Constraint, kind: str, t: int) -> WorkReport:
        overrides = None
        if self.gamma is not None and kind == "rent-evict":
            overrides = {
                vid: self.gamma / self.params.lam
                for term in constraint.terms
                for vid in term.variables
                if vid.startswith("y@")
            }
        report = self.engine.process_constraint(constraint, overrides)
        if report.worked:
            self.work_log.append(
                WorkRecord(
                    step=t,
                    kind=kind,
                    label=constraint.label,
                    tau=report.tau,
                    objective_delta=report.objective_delta,
                    fired=report.fired,
                    n_variables=report.n_variables,
                    raises=report.raises,
                    terms=constraint.terms,
                    threshold=constraint.threshold,
                )
            )
        return report

    def _rent_evict(self, fid: str, t: int) -> tuple[bool, bool]:
        """Work the rent-evict(-zap) constraint of fid at step t.

        Returns (evict_fired, zap_fired).
        """
        x = self._x(fid)
        y = self._y(fid, t)
        variables = [y, x]
        if self.zapping:
            variables.append(self._z(fid))
        constraint = Constraint(
            terms=tuple(Term((v,),) for v in variables),
            threshold=Fraction(1),
            label=f"rent-evict:{fid}@{t}",
        )
        report = self._work(constraint, "rent-evict", t)
        zap_fired = self.zapping and self._z(fid) in report.fired
        evict_fired = x in report.fired
        if zap_fired:
            self.engine.freeze(self._z(fid))
        if evict_fired:
            self.engine.freeze(x)
        return evict_fired, zap_fired

    def _cache_size(self, t: int, requested: str) -> tuple[list[str], list[str], bool]:
        """Work one cache-size constraint over the current resident set.

        Returns (evictions, zaps, requested_zapped).
        """
        need = self.catalog[requested].size
        terms: list[Term] = []
        owner: dict[str, str] = {}
        for g in sorted(self.mirror):
            group = [self._x(g)]
            owner[group[0]] = g
            if self.zapping:
                z = self._z(g)
                group.append(z)
                owner[z] = g
            if self.sized:
                terms.append(Term(tuple(group), Fraction(self.catalog[g].size), cap=1))
            else:
                terms.append(Term(tuple(group)))
        z_req = None
        if self.zapping:
            z_req = self._z(requested)
            if self.sized:
                terms.append(Term((z_req,), Fraction(need), cap=1))
            else:
                terms.append(Term((z_req,)))
        if self.sized:
            threshold = Fraction(need)
            if not self.zapping:
                # Clamp to the evictable mass so a request larger than the
                # current occupancy stays satisfiable (full flush).
                threshold = min(threshold, Fraction(sum(self.catalog[g].size for g in self.mirror)))
        else:
            threshold = Fraction(1)
        constraint = Constraint(tuple(terms), threshold, label=f"cache-size@{t}")
        report = self._work(constraint, "cache-size", t)

        evictions: list[str] = []
        zaps: list[str] = []
        requested_zapped = z_req is not None and z_req in report.fired
        fired_files_zap = set()
        for vid in report.fired:
            self.engine.freeze(vid)
            if vid.startswith("z@") and vid != z_req:
                fired_files_zap.add(owner[vid])
        for vid in report.fired:
            if vid.startswith("x@"):
                g = owner[vid]
                if g not in fired_files_zap:
                    evictions.append(g)
        zaps.extend(sorted(fired_files_zap))
        return evictions, zaps, requested_zapped

    # -- policy step --------------------------------------------------------

    def step(self, t: int, event: Event, view: CacheView) -> PolicyDecision:
        assert view.resident == frozenset(self.mirror), "policy mirror out of sync"
        evictions: list[str] = []
        zaps: list[str] = []
        ev_after: list[str] = []
        zap_after: list[str] = []

        requested = event.file
        hit = requested is not None and requested in self.mirror
        if hit:
            self.last_request[requested] = t  # new phase, fresh x/y variables

        if self.rental:
            for fid in sorted(self.mirror):
                if fid == requested:
                    continue  # its arrival-step constraint runs post-serve
                evict_fired, zap_fired = self._rent_evict(fid, t)
                if zap_fired:
                    zaps.append(fid)
                    self.mirror.discard(fid)
                    self.zapped_mirror.add(fid)
                elif evict_fired:
                    evictions.append(fid)
                    self.mirror.discard(fid)

        served_resident = hit
        if requested is not None and requested not in self.zapped_mirror and not hit:
            size_needed = self.catalog[requested].size
            occupancy = sum(self.catalog[g].size for g in self.mirror)
            requested_zapped = False
            if occupancy + size_needed > self.params.k:
                cs_evictions, cs_zaps, requested_zapped = self._cache_size(t, requested)
                for g in cs_evictions:
                    evictions.append(g)
                    self.mirror.discard(g)
                for g in cs_zaps:
                    zaps.append(g)
                    self.mirror.discard(g)
                    self.zapped_mirror.add(g)
            if requested_zapped:
                zaps.append(requested)
                self.zapped_mirror.add(requested)
            else:
                occupancy = sum(self.catalog[g].size for g in self.mirror)
                assert occupancy + size_needed <= self.params.k, "cache-size work freed too little"
                self.mirror.add(requested)
                self.last_request[requested] = t
                served_resident = True

        if served_resident and self.rental:
            evict_fired, zap_fired = self._rent_evict(requested, t)
            if zap_fired:
                zap_after.append(requested)
                self.mirror.discard(requested)
                self.zapped_mirror.add(requested)
            elif evict_fired:
                ev_after.append(requested)
                self.mirror.discard(requested)

        return PolicyDecision(
            tuple(evictions), tuple(zaps), tuple(ev_after), tuple(zap_after)
        )


def paging_cilp() -> CilpPolicy:
    return CilpPolicy(rental=False, zapping=False, sized=False)


def rental_paging_cilp(gamma: Fraction | None = None) -> CilpPolicy:
    return CilpPolicy(rental=True, zapping=False, sized=False, gamma=gamma)


def rental_caching_cilp(gamma: Fraction | None = None) -> CilpPolicy:
    return CilpPolicy(rental=True, zapping=False, sized=True, gamma=gamma)


def zapping_paging_cilp() -> CilpPolicy:
    return CilpPolicy(rental=False, zapping=True, sized=False)


def zapping_caching_cilp() -> CilpPolicy:
    return CilpPolicy(rental=False, zapping=True, sized=True)


def rental_zapping_paging_cilp(gamma: Fraction | None = None) -> CilpPolicy:
    return CilpPolicy(rental=True, zapping=True, sized=False, gamma=gamma)


def rental_zapping_caching_cilp(gamma: Fraction | None = None) -> CilpPolicy:
    return CilpPolicy(rental=True, zapping=True, sized=True, gamma=gamma)
