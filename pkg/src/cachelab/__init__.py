"""cachelab: a trace-driven laboratory for online file caching with rental
costs and zapping — covering-LP policies, ski-rental compositions, classical
baselines, lower-bound adversaries, and an exact offline optimum."""

from .model import (
    CacheState,
    CacheView,
    CostLedger,
    CostModel,
    Event,
    FileSpec,
    PolicyDecision,
    ProblemParams,
    TICK,
    Trace,
    advance_step,
    req,
    validate_trace,
)
from .oracle import opt, opt_brute_force
from .runner import run_policy
from .policies import make_policy
from .traceio import emit_trace, generate_trace, parse_trace

__all__ = [
    "CacheState",
    "CacheView",
    "CostLedger",
    "CostModel",
    "Event",
    "FileSpec",
    "PolicyDecision",
    "ProblemParams",
    "TICK",
    "Trace",
    "advance_step",
    "req",
    "validate_trace",
    "opt",
    "opt_brute_force",
    "run_policy",
    "make_policy",
    "emit_trace",
    "generate_trace",
    "parse_trace",
]
