"""Greedy online covering solver with floor semantics.

Constraints arrive one at a time.  An unsatisfied constraint is worked on by
raising every non-frozen variable in it, each at a rate inversely proportional
to its objective coefficient (unless overridden), by a common parameter tau
until the floor-sum meets the threshold.  Values are piecewise-linear in tau
and satisfaction can only change when some variable crosses an integer, so the
minimal tau is found by breakpoint enumeration, exactly, in rationals.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping


class CoveringError(Exception):
    pass


class UnsatisfiableConstraint(CoveringError):
    pass


@dataclass(frozen=True)
class Term:
    """weight * min(sum of floor(value) over variables, cap).

    cap=None leaves the floor-sum uncapped.  Grouping several variables in one
    term models contributions like min(floor(x) + floor(z), 1) * size.
    """

    variables: tuple[str, ...]
    weight: Fraction = Fraction(1)
    cap: int | None = None


@dataclass(frozen=True)
class Constraint:
    terms: tuple[Term, ...]
    threshold: Fraction
    label: str = ""

    def variable_ids(self) -> tuple[str, ...]:
        out: list[str] = []
        for term in self.terms:
            out.extend(term.variables)
        return tuple(out)


@dataclass(frozen=True)
class WorkReport:
    tau: Fraction
    objective_delta: Fraction
    fired: tuple[str, ...]  # variables whose floor crossed an integer
    n_variables: int
    raises: tuple[tuple[str, Fraction, Fraction, Fraction], ...]  # (id, coeff, before, after)

    @property
    def worked(self) -> bool:
        return self.tau > 0


ZERO_REPORT = WorkReport(Fraction(0), Fraction(0), (), 0, ())


@dataclass
class _Var:
    coefficient: Fraction
    value: Fraction = Fraction(0)
    frozen: bool = False


@dataclass
class CoveringEngine:
    variables: dict[str, _Var] = field(default_factory=dict)
    objective: Fraction = Fraction(0)

    def register(self, vid: str, coefficient: Fraction) -> None:
        if coefficient <= 0:
            raise CoveringError(f"variable {vid}: coefficient must be > 0")
        existing = self.variables.get(vid)
        if existing is None:
            self.variables[vid] = _Var(coefficient)
        elif existing.coefficient != coefficient:
            raise CoveringError(f"variable {vid} re-registered with a new coefficient")

    def value(self, vid: str) -> Fraction:
        return self.variables[vid].value

    def freeze(self, vid: str) -> None:
        self.variables[vid].frozen = True

    def _evaluate(self, constraint: Constraint, values: Mapping[str, Fraction]) -> Fraction:
        total = Fraction(0)
        for term in constraint.terms:
            floors = sum(int(values[v]) if values[v] >= 0 else 0 for v in term.variables)
            if term.cap is not None:
                floors = min(floors, term.cap)
            total += term.weight * floors
        return total

    def satisfied(self, constraint: Constraint) -> bool:
        values = {v: self.variables[v].value for v in constraint.variable_ids()}
        return self._evaluate(constraint, values) >= constraint.threshold

    def process_constraint(
        self,
        constraint: Constraint,
        rate_overrides: Mapping[str, Fraction] | None = None,
    ) -> WorkReport:
        vids = constraint.variable_ids()
        if len(set(vids)) != len(vids):
            raise CoveringError(f"constraint {constraint.label}: duplicate variable")
        for vid in vids:
            if vid not in self.variables:
                raise CoveringError(f"constraint references unregistered variable {vid}")
        if self.satisfied(constraint):
            return ZERO_REPORT

        rates: dict[str, Fraction] = {}
        for vid in vids:
            var = self.variables[vid]
            if var.frozen:
                continue
            rate = None if rate_overrides is None else rate_overrides.get(vid)
            if rate is None:
                rate = 1 / var.coefficient
            if rate <= 0:
                raise CoveringError(f"variable {vid}: rate must be > 0")
            rates[vid] = rate
        if not rates:
            raise UnsatisfiableConstraint(
                f"constraint {constraint.label}: all variables frozen, floors insufficient"
            )

        # Walk integer-crossing breakpoints in ascending tau until satisfied.
        values = {v: self.variables[v].value for v in vids}
        heap: list[tuple[Fraction, str]] = []
        for vid, rate in rates.items():
            tau_next = (int(values[vid]) + 1 - values[vid]) / rate
            heapq.heappush(heap, (tau_next, vid))
        tau = None
        crossings = 0
        while heap:
            tau_cand, vid = heapq.heappop(heap)
            trial = {
                v: values[v] + (rates[v] * tau_cand if v in rates else 0) for v in vids
            }
            if self._evaluate(constraint, trial) >= constraint.threshold:
                tau = tau_cand
                break
            crossings += 1
            if crossings > 100_000:
                raise UnsatisfiableConstraint(
                    f"constraint {constraint.label}: no finite raise satisfies it"
                )
            level = int(values[vid] + rates[vid] * tau_cand) + 1
            heapq.heappush(heap, ((level - values[vid]) / rates[vid], vid))
        if tau is None:
            raise UnsatisfiableConstraint(
                f"constraint {constraint.label}: saturated below threshold"
            )

        raises = []
        fired = []
        delta = Fraction(0)
        for vid in vids:
            if vid not in rates:
                continue
            var = self.variables[vid]
            before = var.value
            after = before + rates[vid] * tau
            var.value = after
            delta += var.coefficient * (after - before)
            raises.append((vid, var.coefficient, before, after))
            if int(after) > int(before):
                fired.append(vid)
        self.objective += delta
        return WorkReport(tau, delta, tuple(sorted(fired)), len(vids), tuple(raises))

    def potential(self, reference: Mapping[str, tuple[Fraction, Fraction]]) -> Fraction:
        """Sum of coeff * max(reference - current, 0).

        ``reference`` maps variable id -> (coefficient, reference value) and
        must cover every registered variable; variables the engine has not
        registered yet count as 0.
        """
        phi = Fraction(0)
        for vid, var in self.variables.items():
            if vid not in reference:
                raise CoveringError(f"reference assignment missing variable {vid}")
        for vid, (coeff, ref) in reference.items():
            var = self.variables.get(vid)
            current = var.value if var is not None else Fraction(0)
            if var is not None and var.coefficient != coeff:
                raise CoveringError(f"reference coefficient mismatch for {vid}")
            if ref > current:
                phi += coeff * (ref - current)
        return phi
