"""Deterministic, splittable, counter-based pseudo-random scheme.

Every draw is blake2b(root_key || counter); child streams re-key with a label
path, so component draws (per run, per file, per phase) are independent and
reproducible from the experiment seed alone.  This construction is stable
across Python releases because it relies only on the hash function.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Sequence

_SCALE = 1 << 64


class CounterRng:
    def __init__(self, seed: int | bytes, *labels: object):
        if isinstance(seed, int):
            seed = seed.to_bytes(16, "little", signed=False)
        key = hashlib.blake2b(seed, digest_size=16)
        for label in labels:
            key.update(b"/" + str(label).encode())
        self._key = key.digest()
        self._counter = 0

    def child(self, *labels: object) -> "CounterRng":
        """Independent stream; does not consume draws from this one."""
        return CounterRng(self._key, *labels)

    def u64(self) -> int:
        h = hashlib.blake2b(self._key, digest_size=8)
        h.update(self._counter.to_bytes(8, "little"))
        self._counter += 1
        return int.from_bytes(h.digest(), "little")

    def fraction(self) -> Fraction:
        """Uniform rational in [0, 1)."""
        return Fraction(self.u64(), _SCALE)

    def randrange(self, n: int) -> int:
        if n <= 0:
            raise ValueError("empty range")
        # Rejection sampling keeps the distribution exactly uniform.
        limit = _SCALE - (_SCALE % n)
        while True:
            u = self.u64()
            if u < limit:
                return u % n

    def choice(self, seq: Sequence):
        return seq[self.randrange(len(seq))]
