"""Classical ground truth for every wave-number claim.

A plain sieve of Eratosthenes plus trial division.  This module imports
nothing else from the package so that it stays an independent check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

#: Refuse to allocate sieve tables larger than this (one byte per integer).
DEFAULT_MEMORY_BUDGET = 2 * 1024**3


class OracleMemoryError(MemoryError):
    def __init__(self, limit: int, required: int, budget: int):
        super().__init__(
            f"sieve to {limit} needs about {required} bytes, budget is {budget} bytes"
        )
        self.limit = limit
        self.required = required
        self.budget = budget


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes ``<= limit`` in ascending order."""

    limit: int
    primes: np.ndarray
    _flags: np.ndarray = field(repr=False)

    def __contains__(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise ValueError(f"{n} outside table range [0, {self.limit}]")
        return bool(self._flags[n])

    def __len__(self):
        return len(self.primes)

    def as_list(self) -> list[int]:
        return [int(p) for p in self.primes]

    def primes_in(self, lo: int, hi: int) -> list[int]:
        """Primes ``p`` with ``lo <= p < hi``; ``hi - 1`` must be within the table."""
        if hi - 1 > self.limit:
            raise ValueError(f"range end {hi} beyond table limit {self.limit}")
        a = np.searchsorted(self.primes, lo, side="left")
        b = np.searchsorted(self.primes, hi, side="left")
        return [int(p) for p in self.primes[a:b]]

    def count_upto(self, n: int) -> int:
        if n > self.limit:
            raise ValueError(f"{n} beyond table limit {self.limit}")
        return int(np.searchsorted(self.primes, n, side="right"))


def sieve(limit: int, memory_budget: int = DEFAULT_MEMORY_BUDGET) -> PrimeTable:
    if limit < 2:
        return PrimeTable(max(limit, 0), np.array([], dtype=np.int64), np.zeros(max(limit, 0) + 1, dtype=bool))
    required = limit + 1 + 8 * int(1.3 * limit / math.log(limit))
    if required > memory_budget:
        raise OracleMemoryError(limit, required, memory_budget)
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    flags.setflags(write=False)
    primes = np.flatnonzero(flags).astype(np.int64)
    primes.setflags(write=False)
    return PrimeTable(limit, primes, flags)


@lru_cache(maxsize=8)
def cached_sieve(limit: int) -> PrimeTable:
    return sieve(limit)


def is_prime(n: int) -> bool:
    """Deterministic trial division; slow but independent of the sieve."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0 or n % 3 == 0:
        return False
    d = 5
    while d * d <= n:
        if n % d == 0 or n % (d + 2) == 0:
            return False
        d += 6
    return True


def largest_prime_below(n: int) -> int:
    """Greatest prime strictly less than ``n``."""
    if n <= 2:
        raise ValueError(f"no prime below {n}")
    table = cached_sieve(n - 1)
    return int(table.primes[-1])


def prime_count(limit: int) -> int:
    if limit < 2:
        return 0
    return len(cached_sieve(limit))


def gauss_estimate(limit: float) -> float:
    """``limit / ln(limit)``, for report comparison only."""
    return limit / math.log(limit)


def first_primes(count: int) -> list[int]:
    """The first ``count`` primes."""
    if count <= 0:
        return []
    # p_n < n (ln n + ln ln n) for n >= 6
    bound = 15 if count < 6 else int(count * (math.log(count) + math.log(math.log(count)))) + 1
    return cached_sieve(bound).as_list()[:count]
