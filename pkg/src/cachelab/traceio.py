"""Trace file format and random trace generation.

Line-oriented UTF-8: `#` comments, `file <id> <size> <cost>` catalog lines
first, then `req <id>` and `tick` event lines.  Rationals are `p/q` or
decimal strings.
"""

from __future__ import annotations

from fractions import Fraction

from .model import Event, FileSpec, TICK, Trace, parse_rational, req
from .rng import CounterRng


class TraceParseError(ValueError):
    def __init__(self, line_no: int, reason: str):
        super().__init__(f"line {line_no}: {reason}")
        self.line_no = line_no
        self.reason = reason


def parse_trace(text: str) -> Trace:
    catalog: dict[str, FileSpec] = {}
    events: list[Event] = []
    events_started = False
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "file":
            if events_started:
                raise TraceParseError(line_no, "catalog line after events")
            if len(fields) != 4:
                raise TraceParseError(line_no, "expected: file <id> <size> <cost>")
            fid = fields[1]
            if fid in catalog:
                raise TraceParseError(line_no, f"duplicate file {fid!r}")
            try:
                size = int(fields[2])
                cost = parse_rational(fields[3])
                catalog[fid] = FileSpec(fid, size, cost)
            except ValueError as exc:
                raise TraceParseError(line_no, str(exc)) from None
        elif kind == "req":
            if len(fields) != 2:
                raise TraceParseError(line_no, "expected: req <id>")
            if fields[1] not in catalog:
                raise TraceParseError(line_no, f"request to undeclared file {fields[1]!r}")
            events_started = True
            events.append(req(fields[1]))
        elif kind == "tick":
            if len(fields) != 1:
                raise TraceParseError(line_no, "expected: tick")
            events_started = True
            events.append(TICK)
        else:
            raise TraceParseError(line_no, f"unknown directive {kind!r}")
    return Trace(catalog, tuple(events))


def emit_trace(trace: Trace) -> str:
    lines = []
    for fid in sorted(trace.catalog):
        spec = trace.catalog[fid]
        lines.append(f"file {spec.id} {spec.size} {spec.cost}")
    for ev in trace.events:
        lines.append(f"req {ev.file}" if ev.is_request else "tick")
    return "\n".join(lines) + "\n"


def generate_trace(
    rng: CounterRng,
    n_files: int,
    n_steps: int,
    tick_density: Fraction = Fraction(1, 4),
    size_range: tuple[int, int] = (1, 1),
    cost_range: tuple[int, int] = (1, 1),
    bit_model: bool = False,
    fault_model: bool = False,
) -> Trace:
    """Seeded random trace; (rng, arguments) fully determine the output."""
    catalog: dict[str, FileSpec] = {}
    for i in range(n_files):
        fid = f"f{i}"
        size = size_range[0] + rng.randrange(size_range[1] - size_range[0] + 1)
        if bit_model:
            cost = Fraction(size)
        elif fault_model:
            cost = Fraction(1)
        else:
            cost = Fraction(cost_range[0] + rng.randrange(cost_range[1] - cost_range[0] + 1))
        catalog[fid] = FileSpec(fid, size, cost)
    fids = sorted(catalog)
    events: list[Event] = []
    for _ in range(n_steps):
        if rng.fraction() < tick_density:
            events.append(TICK)
        else:
            events.append(req(rng.choice(fids)))
    return Trace(catalog, tuple(events))
