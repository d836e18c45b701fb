"""Timing of co-number (wheel) candidate enumeration against a plain sieve."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import oracle
from .conumber_sieve import scan_window, wheel_candidates
from .modular_rep import zeta_proportion


@dataclass(frozen=True)
class BenchResult:
    limit: int
    wheel_primes: tuple[int, ...]
    period: int
    density: Fraction
    baseline_seconds: float
    baseline_primes: int
    wheel_seconds: float
    candidates_examined: int
    wheel_primes_found: int
    period_candidates: int

    @property
    def period_check(self) -> bool:
        return self.period_candidates == self.density * self.period

    @property
    def count_check(self) -> bool:
        return self.wheel_primes_found == self.baseline_primes

    def rows(self) -> list[dict]:
        common = {
            "limit": self.limit,
            "wheel_primes": " ".join(map(str, self.wheel_primes)),
            "density": f"{self.density.numerator}/{self.density.denominator}",
            "period": self.period,
        }
        return [
            {
                "method": "baseline_sieve",
                **common,
                "candidates_examined": self.limit - 1,
                "primes_found": self.baseline_primes,
                "wall_seconds": round(self.baseline_seconds, 6),
            },
            {
                "method": "conumber_wheel",
                **common,
                "candidates_examined": self.candidates_examined,
                "primes_found": self.wheel_primes_found,
                "wall_seconds": round(self.wheel_seconds, 6),
            },
        ]


def _confirm(candidates: np.ndarray, limit: int) -> int:
    """Count primes among wheel candidates by trial division."""
    root = math.isqrt(limit)
    small = [int(c) for c in candidates[(candidates > 1) & (candidates <= root)]]
    divisors = [c for c in small if all(c % d for d in range(2, math.isqrt(c) + 1))]
    big = candidates[candidates > root]
    for d in divisors:
        big = big[big % d != 0]
    return len(divisors) + int(big.size)


def run_bench(limit: int, wheel_primes=(2, 3, 5)) -> BenchResult:
    wheel = tuple(sorted(int(p) for p in wheel_primes))
    period = math.prod(wheel)

    t0 = time.perf_counter()
    baseline = len(oracle.sieve(limit))
    t1 = time.perf_counter()
    cands = wheel_candidates(wheel, limit)
    found = _confirm(cands, limit) + sum(1 for p in wheel if p <= limit)
    t2 = time.perf_counter()

    return BenchResult(
        limit=limit,
        wheel_primes=wheel,
        period=period,
        density=zeta_proportion(wheel),
        baseline_seconds=t1 - t0,
        baseline_primes=baseline,
        wheel_seconds=t2 - t1,
        candidates_examined=int(cands.size),
        wheel_primes_found=found,
        period_candidates=len(scan_window(wheel, 1, period + 1)),
    )
