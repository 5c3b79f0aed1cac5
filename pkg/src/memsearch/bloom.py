"""Fixed-size Bloom filter keyed by 128-bit fingerprints.

Probe positions use double hashing over the two 64-bit halves of the key:
``index_i = (h1 + i * h2) mod m`` for ``i`` in ``0..k-1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MASK64 = (1 << 64) - 1
_LN2 = math.log(2)


@dataclass(frozen=True)
class BloomParams:
    n: int
    target_fpr: float
    m: int
    k: int

    @property
    def nbytes(self) -> int:
        return (self.m + 7) // 8

    @property
    def mib(self) -> float:
        return self.m / 8 / 2**20


def params_for(n: int, target_fpr: float) -> BloomParams:
    """Size a filter for ``n`` elements at false-positive rate ``target_fpr``."""
    if n < 1:
        raise ValueError(f"expected element count must be >= 1, got {n}")
    if not 0.0 < target_fpr < 1.0:
        raise ValueError(f"target_fpr must lie in (0, 1), got {target_fpr}")
    m = math.ceil(-n * math.log(target_fpr) / _LN2**2)
    k = max(1, round(_LN2 * m / n))
    return BloomParams(n=n, target_fpr=target_fpr, m=m, k=k)


def _halves(key: int, m: int) -> tuple[int, int]:
    h1 = (key & _MASK64) % m
    h2 = ((key >> 64) & _MASK64 | 1) % m
    return h1, h2 or 1


class BloomFilter:
    def __init__(self, m: int, k: int):
        if not m >= k >= 1:
            raise ValueError(f"need m >= k >= 1, got m={m}, k={k}")
        self.m = m
        self.k = k
        self.bits = bytearray((m + 7) // 8)
        self.inserted_count = 0

    @classmethod
    def from_params(cls, params: BloomParams) -> BloomFilter:
        return cls(params.m, params.k)

    @classmethod
    def for_capacity(cls, n: int, target_fpr: float) -> BloomFilter:
        return cls.from_params(params_for(n, target_fpr))

    def probes(self, key: int) -> list[int]:
        m = self.m
        h1, h2 = _halves(key, m)
        return [(h1 + i * h2) % m for i in range(self.k)]

    def insert(self, key: int) -> None:
        bits = self.bits
        m = self.m
        h1, h2 = _halves(key, m)
        idx = h1
        for _ in range(self.k):
            bits[idx >> 3] |= 1 << (idx & 7)
            idx += h2
            if idx >= m:
                idx -= m
        self.inserted_count += 1

    add = insert

    def contains(self, key: int) -> bool:
        bits = self.bits
        m = self.m
        h1, h2 = _halves(key, m)
        idx = h1
        for _ in range(self.k):
            if not bits[idx >> 3] & (1 << (idx & 7)):
                return False
            idx += h2
            if idx >= m:
                idx -= m
        return True

    __contains__ = contains

    def clear(self) -> None:
        self.bits = bytearray(len(self.bits))
        self.inserted_count = 0

    @property
    def nbytes(self) -> int:
        return len(self.bits)

    # Vectorised paths for bulk statistics; keys are given as two uint64 arrays.

    def _probe_matrix(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        m = np.uint64(self.m)
        h1 = lo.astype(np.uint64) % m
        h2 = (hi.astype(np.uint64) | np.uint64(1)) % m
        h2[h2 == 0] = 1
        steps = np.arange(self.k, dtype=np.uint64)
        # h1, h2 < m < 2**40 and i < 2**8, so the sum cannot wrap.
        return (h1[:, None] + steps[None, :] * h2[:, None]) % m

    def insert_many(self, lo: np.ndarray, hi: np.ndarray) -> None:
        idx = self._probe_matrix(lo, hi).ravel()
        arr = np.frombuffer(self.bits, dtype=np.uint8)
        np.bitwise_or.at(arr, (idx >> np.uint64(3)).astype(np.int64),
                         (np.uint8(1) << (idx & np.uint64(7)).astype(np.uint8)))
        self.inserted_count += len(lo)

    def contains_many(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        idx = self._probe_matrix(lo, hi)
        arr = np.frombuffer(self.bits, dtype=np.uint8)
        byte = arr[(idx >> np.uint64(3)).astype(np.int64)]
        hit = (byte >> (idx & np.uint64(7)).astype(np.uint8)) & 1
        return hit.all(axis=1)


def split_keys(keys) -> tuple[np.ndarray, np.ndarray]:
    """Split Python-int 128-bit keys into (low, high) uint64 arrays."""
    lo = np.fromiter((k & _MASK64 for k in keys), dtype=np.uint64)
    hi = np.fromiter(((k >> 64) & _MASK64 for k in keys), dtype=np.uint64)
    return lo, hi
