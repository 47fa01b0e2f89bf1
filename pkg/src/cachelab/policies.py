"""Policy name registry.

Names accepted by the CLI and the experiment harness:

  paging-cilp, rental-paging-cilp[:gamma=<rat>], rental-caching-cilp[:gamma=<rat>],
  zapping-paging-cilp, zapping-caching-cilp,
  rental-zapping-paging-cilp[:gamma=<rat>], rental-zapping-caching-cilp[:gamma=<rat>],
  alg-inf:det, alg-inf:rand, high-rent:det, high-rent:rand,
  lru, fifo, fwf, marking, rand-marking, landlord, zap-first,
  a_d:<inner>:<d>, meta:<inner>+<ski>
"""

from __future__ import annotations

from .baselines import Fifo, Fwf, IdleEvict, Landlord, Lru, Marking, ZapFirst
from .cilp import (
    paging_cilp,
    rental_caching_cilp,
    rental_paging_cilp,
    rental_zapping_caching_cilp,
    rental_zapping_paging_cilp,
    zapping_caching_cilp,
    zapping_paging_cilp,
)
from .meta import MetaPolicy
from .model import parse_rational
from .rng import CounterRng
from .ski import AlgInfinity, alg_infinity, high_rent_paging


class UnknownPolicy(ValueError):
    pass


_GAMMA_CILP = {
    "rental-paging-cilp": rental_paging_cilp,
    "rental-caching-cilp": rental_caching_cilp,
    "rental-zapping-paging-cilp": rental_zapping_paging_cilp,
    "rental-zapping-caching-cilp": rental_zapping_caching_cilp,
}

_ALIASES = {
    "zap-caching-cilp": "zapping-caching-cilp",
    "zap-paging-cilp": "zapping-paging-cilp",
}


def is_randomized(name: str) -> bool:
    return ":rand" in name or name.startswith("rand-") or ("+alg-inf:rand" in name)


def make_policy(name: str, rng: CounterRng | None = None):
    """Instantiate a policy; randomized ones draw from `rng` children."""
    name = _ALIASES.get(name, name)
    if rng is None:
        rng = CounterRng(0, "default")

    if name.startswith("meta:"):
        body = name[len("meta:"):]
        if "+" not in body:
            raise UnknownPolicy(f"meta needs 'meta:<inner>+<ski>': {name!r}")
        inner_name, ski_name = body.split("+", 1)
        inner = make_policy(inner_name, rng.child("inner"))
        ski = make_policy(ski_name, rng.child("ski"))
        if not isinstance(ski, AlgInfinity) or ski.capacity_bounded:
            raise UnknownPolicy(f"meta's second component must be alg-inf: {ski_name!r}")
        return MetaPolicy(inner, ski)

    if name.startswith("a_d:"):
        parts = name.split(":")
        if len(parts) != 3:
            raise UnknownPolicy(f"a_d needs 'a_d:<inner>:<d>': {name!r}")
        inner = make_policy(parts[1], rng.child("inner"))
        if not isinstance(inner, (Lru, Fifo, Fwf, Marking)):
            raise UnknownPolicy("a_d inner must be a conservative or marking policy")
        return IdleEvict(inner, int(parts[2]))

    gamma = None
    if ":gamma=" in name:
        name, _, raw = name.partition(":gamma=")
        gamma = parse_rational(raw)
    if name in _GAMMA_CILP:
        return _GAMMA_CILP[name](gamma)
    if gamma is not None:
        raise UnknownPolicy(f"{name!r} does not take a gamma")

    table = {
        "paging-cilp": paging_cilp,
        "zapping-paging-cilp": zapping_paging_cilp,
        "zapping-caching-cilp": zapping_caching_cilp,
        "alg-inf:det": lambda: alg_infinity(False),
        "alg-inf:rand": lambda: alg_infinity(True, rng.child("alg-inf")),
        "high-rent:det": lambda: high_rent_paging(False),
        "high-rent:rand": lambda: high_rent_paging(True, rng.child("high-rent")),
        "lru": Lru,
        "fifo": Fifo,
        "fwf": Fwf,
        "marking": Marking,
        "rand-marking": lambda: Marking(True, rng.child("marking")),
        "landlord": Landlord,
        "zap-first": ZapFirst,
    }
    factory = table.get(name)
    if factory is None:
        raise UnknownPolicy(f"unknown policy {name!r}")
    return factory()


def needs_unbounded_cache(policy) -> bool:
    return getattr(policy, "capacity_bounded", None) is False
