"""Recursive prime identification from cumulative products of prime co-numbers.

The cumulative product of the co-numbers of ``p_1 .. p_N`` vanishes at a
phase exactly when one of those primes divides it, so its value is decided
by trial division and the period ``P_N`` is never materialized.  Inside the
window ``[p_{N+1}, p_{N+1}**2)`` the surviving phases are exactly the primes;
each window is checked against the oracle before its primes are used.
"""

from __future__ import annotations

import itertools
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Literal

import numpy as np

from . import oracle
from .errors import DomainError, VerificationError
from .wave_core import STAR, Term, WaveNumber, circular_product_many_term

DEFAULT_PHASE_BUDGET = 10**8
DEFAULT_CHUNK_SIZE = 1 << 20

# numpy int64 path is used while every phase fits comfortably
_INT64_SAFE = 1 << 62

Mode = Literal["conservative", "maximal"]


@dataclass(frozen=True)
class CoProduct:
    """Circular product of the co-numbers of distinct ascending primes."""

    primes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "primes", tuple(int(p) for p in self.primes))
        if not self.primes:
            raise DomainError("a co-number product needs at least one prime")
        if any(b <= a for a, b in zip(self.primes, self.primes[1:])):
            raise DomainError(f"primes must be strictly increasing: {self.primes}")
        bad = [p for p in self.primes if not oracle.is_prime(p)]
        if bad:
            raise DomainError(f"not prime: {bad}")

    @cached_property
    def period(self) -> int:
        return math.prod(self.primes)

    def extend(self, p: int) -> CoProduct:
        return CoProduct(self.primes + (p,))

    def wave(self) -> WaveNumber:
        return WaveNumber(self.period, tuple((p, 1) for p in self.primes))

    def value(self, k: int) -> Term:
        return coproduct_value(self, k)


def coproduct_value(cp: CoProduct, k: int) -> Term:
    """Value at phase ``k`` decided by divisibility alone."""
    if k < 0:
        raise DomainError(f"sieve phases are non-negative, got {k}")
    for p in cp.primes:
        if k % p == 0:
            return Term(None)
    return Term.root(k, cp.period)


def elementwise_value(cp: CoProduct, k: int) -> Term:
    """Same value built from the element-wise N-fold product of co-numbers."""
    return circular_product_many_term(cp.primes, k, [STAR] * len(cp.primes))


def next_candidate(primes) -> int:
    """Smallest phase above ``max(primes)`` divisible by none of them."""
    k = max(primes) + 1
    while any(k % p == 0 for p in primes):
        k += 1
    return k


def zeros_equivalence_check(N: int, bound: int) -> bool:
    """Compare zero phases of the natural and prime co-number products up to ``bound``."""
    if N < 2 or bound < N:
        raise DomainError(f"need N >= 2 and bound >= N, got N={N}, bound={bound}")
    ks = np.arange(1, bound + 1, dtype=np.int64)
    natural = np.zeros(bound, dtype=bool)
    for n in range(2, N + 1):
        natural |= ks % n == 0
    prime = np.zeros(bound, dtype=bool)
    for p in oracle.sieve(N).as_list():
        prime |= ks % p == 0
    return bool(np.array_equal(natural, prime))


def _scan_chunk(primes: tuple[int, ...], lo: int, hi: int) -> list[int]:
    if hi <= _INT64_SAFE:
        arr = np.arange(lo, hi, dtype=np.int64)
        for p in primes:
            arr = arr[arr % p != 0]
            if arr.size == 0:
                break
        return arr.tolist()
    return [k for k in range(lo, hi) if all(k % p for p in primes)]


def scan_window(
    primes, lo: int, hi: int, jobs: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> list[int]:
    """Phases in ``[lo, hi)`` where the co-number product is nonzero, ascending.

    Chunks may run concurrently; results are merged in chunk order so the
    output does not depend on completion order.
    """
    primes = tuple(int(p) for p in primes)
    if hi <= lo:
        return []
    bounds = [(a, min(a + chunk_size, hi)) for a in range(lo, hi, chunk_size)]
    if jobs <= 1 or len(bounds) == 1:
        parts = [_scan_chunk(primes, a, b) for a, b in bounds]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(lambda ab: _scan_chunk(primes, *ab), bounds))
    out: list[int] = []
    for part in parts:
        out.extend(part)
    return out


@dataclass(frozen=True)
class SieveState:
    coproduct: CoProduct
    next_prime: int
    bound_prime: int

    def __post_init__(self):
        top = self.coproduct.primes[-1]
        if not top < self.next_prime < self.bound_prime:
            raise DomainError(
                f"need max prime {top} < next {self.next_prime} < bound {self.bound_prime}"
            )
        for p in (self.next_prime, self.bound_prime):
            if not oracle.is_prime(p):
                raise DomainError(f"{p} is not prime")
        if self.next_prime**2 <= top:
            raise DomainError("empty window")

    @property
    def iteration(self) -> int:
        return len(self.coproduct.primes)

    @property
    def window(self) -> tuple[int, int]:
        return self.next_prime, self.next_prime**2


def initial_state() -> SieveState:
    """The recursion's initial condition: the co-number of 2 alone."""
    return SieveState(CoProduct((2,)), 3, 5)


@dataclass(frozen=True)
class WindowReport:
    iteration: int
    lo: int
    hi: int
    surviving_phases: tuple[int, ...]
    oracle_primes: tuple[int, ...]
    verdict: str
    missing: tuple[int, ...] = ()
    extra: tuple[int, ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    @property
    def matched(self) -> bool:
        return self.verdict == "match"

    @property
    def first_offending_phase(self) -> int | None:
        bad = self.missing + self.extra
        return min(bad) if bad else None

    def to_dict(self, include_elapsed: bool = True) -> dict:
        d = asdict(self)
        for key in ("surviving_phases", "oracle_primes", "missing", "extra"):
            d[key] = list(d[key])
        if not include_elapsed:
            del d["elapsed"]
        return d

    @classmethod
    def from_dict(cls, d: dict) -> WindowReport:
        d = dict(d)
        for key in ("surviving_phases", "oracle_primes", "missing", "extra"):
            d[key] = tuple(d.get(key, ()))
        return cls(**d)


def verify_window(
    primes,
    lo: int,
    hi: int,
    iteration: int,
    jobs: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> WindowReport:
    """Scan ``[lo, hi)`` and compare the surviving phases with the oracle."""
    if hi <= lo:
        raise DomainError(f"empty window [{lo}, {hi})")
    t0 = time.perf_counter()
    surviving = scan_window(primes, lo, hi, jobs=jobs, chunk_size=chunk_size)
    elapsed = time.perf_counter() - t0
    expected = oracle.cached_sieve(hi - 1).primes_in(lo, hi)
    got = set(surviving)
    want = set(expected)
    missing = tuple(sorted(want - got))
    extra = tuple(sorted(got - want))
    return WindowReport(
        iteration=iteration,
        lo=lo,
        hi=hi,
        surviving_phases=tuple(surviving),
        oracle_primes=tuple(expected),
        verdict="match" if not (missing or extra) else "mismatch",
        missing=missing,
        extra=extra,
        elapsed=elapsed,
    )


def window_primes(
    state: SieveState, jobs: int = 1, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> WindowReport:
    lo, hi = state.window
    return verify_window(state.coproduct.primes, lo, hi, state.iteration, jobs, chunk_size)


def recursion_step(state: SieveState, report: WindowReport | None = None) -> SieveState:
    """Append ``next_prime`` to the product and read the next two primes off the window."""
    if report is None:
        report = window_primes(state)
    if not report.matched:
        raise VerificationError(
            f"window [{report.lo}, {report.hi}) disagrees with the oracle "
            f"at phase {report.first_offending_phase}",
            report,
        )
    later = [k for k in report.surviving_phases if k > state.next_prime]
    if len(later) < 2:
        raise VerificationError(
            f"window [{report.lo}, {report.hi}) holds fewer than two primes after {state.next_prime}",
            report,
        )
    if later[0] != state.bound_prime:
        raise VerificationError(
            f"window gives {later[0]} after {state.next_prime}, state expected {state.bound_prime}",
            report,
        )
    return SieveState(state.coproduct.extend(state.next_prime), later[0], later[1])


def count_estimate(iteration: int) -> float | None:
    """``7**(2(N-1)) / (2(N-1) ln 7)``; undefined for the first iteration."""
    if iteration <= 1:
        return None
    e = 2 * (iteration - 1)
    return 7**e / (e * math.log(7))


@dataclass(frozen=True)
class ScheduleEntry:
    iteration: int
    largest_prime: int
    count: int
    lo: int
    hi: int
    estimate: float | None = None
    relative_error: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> ScheduleEntry:
        return cls(**d)


@dataclass(frozen=True)
class ScheduleResult:
    mode: str
    entries: tuple[ScheduleEntry, ...]
    reports: tuple[WindowReport, ...]
    budget_exhausted: bool
    phases_scanned: int
    primes: tuple[int, ...]

    def as_tuples(self) -> list[tuple[int, int, int]]:
        return [(e.iteration, e.largest_prime, e.count) for e in self.entries]


def _entry(iteration: int, report: WindowReport, count: int, with_estimate: bool) -> ScheduleEntry:
    est = count_estimate(iteration) if with_estimate else None
    rel = abs(count - est) / count if est is not None else None
    return ScheduleEntry(
        iteration=iteration,
        largest_prime=report.surviving_phases[-1],
        count=count,
        lo=report.lo,
        hi=report.hi,
        estimate=est,
        relative_error=rel,
    )


def _counter(iterations):
    return range(1, iterations + 1) if iterations is not None else itertools.count(1)


def _done(i, iterations, until, hi) -> bool:
    if iterations is not None and i >= iterations:
        return True
    return until is not None and hi > until


def run_schedule(
    iterations: int | None,
    mode: Mode = "maximal",
    phase_budget: int = DEFAULT_PHASE_BUDGET,
    jobs: int = 1,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
    until: int | None = None,
) -> ScheduleResult:
    """Iterate the window theorem in one of two schedules.

    ``conservative`` adds one prime to the product per step.  ``maximal``
    feeds every prime found so far into the next product, so the largest
    identified prime goes 7, 47, 2207, ...
    A window that would push the scanned-phase total past ``phase_budget``
    is not scanned; the result is returned with ``budget_exhausted`` set.
    With ``until`` set, iteration stops once every prime up to ``until`` has
    been identified (``iterations`` may then be None).
    """
    if iterations is None and until is None:
        raise DomainError("give iterations, until, or both")
    if iterations is not None and iterations < 1:
        raise DomainError(f"iterations must be >= 1, got {iterations}")
    if until is not None and until < 2:
        raise DomainError(f"until must be >= 2, got {until}")
    if mode not in ("conservative", "maximal"):
        raise DomainError(f"unknown mode {mode!r}")
    entries: list[ScheduleEntry] = []
    reports: list[WindowReport] = []
    scanned = 0
    exhausted = False

    if mode == "conservative":
        state = initial_state()
        known = [2]
        for i in _counter(iterations):
            lo, hi = state.window
            if scanned + (hi - lo) > phase_budget:
                exhausted = True
                break
            report = window_primes(state, jobs, chunk_size)
            scanned += hi - lo
            reports.append(report)
            if not report.matched:
                raise VerificationError(
                    f"window [{lo}, {hi}) disagrees with the oracle at phase "
                    f"{report.first_offending_phase}",
                    report,
                )
            known = list(state.coproduct.primes) + list(report.surviving_phases)
            entries.append(_entry(i, report, len(known), with_estimate=False))
            if _done(i, iterations, until, hi):
                break
            state = recursion_step(state, report)
    else:
        cp: tuple[int, ...] = (2,)
        lo = next_candidate(cp)
        known = [2]
        for i in _counter(iterations):
            hi = lo * lo
            if scanned + (hi - lo) > phase_budget:
                exhausted = True
                break
            report = verify_window(cp, lo, hi, i, jobs, chunk_size)
            scanned += hi - lo
            reports.append(report)
            if not report.matched:
                raise VerificationError(
                    f"window [{lo}, {hi}) disagrees with the oracle at phase "
                    f"{report.first_offending_phase}",
                    report,
                )
            known = list(cp) + list(report.surviving_phases)
            entries.append(_entry(i, report, len(known), with_estimate=True))
            if _done(i, iterations, until, hi):
                break
            # the largest prime found becomes the next window start; all the
            # smaller ones go into the product
            lo = known[-1]
            cp = tuple(known[:-1])

    return ScheduleResult(
        mode=mode,
        entries=tuple(entries),
        reports=tuple(reports),
        budget_exhausted=exhausted,
        phases_scanned=scanned,
        primes=tuple(known),
    )


def circle_sum(primes, k: int) -> int:
    """Arithmetic sum of the circle-function values of ``primes`` at ``k``."""
    return sum(1 for p in primes if k % p == 0)


def circle_sum_test(primes, k: int) -> bool:
    """Primality of ``k`` from the circle functions of the first N primes.

    Only valid for ``p_N < k < p_{N+1}**2``.
    """
    primes = [int(p) for p in primes]
    if not primes or primes != oracle.first_primes(len(primes)):
        raise DomainError("circle_sum_test needs the first N primes in order")
    nxt = next_candidate(primes)
    if not primes[-1] < k < nxt * nxt:
        raise DomainError(f"phase {k} outside ({primes[-1]}, {nxt * nxt})")
    return circle_sum(primes, k) == 0


def surviving_fraction(primes) -> Fraction:
    """Share of one full period on which the co-number product is nonzero."""
    primes = tuple(int(p) for p in primes)
    period = math.prod(primes)
    return Fraction(len(scan_window(primes, 1, period + 1)), period)


def wheel_candidates(primes, limit: int) -> np.ndarray:
    """Phases in ``[1, limit]`` not divisible by any of ``primes``.

    One period is scanned and then tiled, so the cost is linear in the number
    of candidates rather than in ``limit``.
    """
    primes = tuple(int(p) for p in primes)
    period = math.prod(primes)
    residues = np.asarray(scan_window(primes, 1, period + 1), dtype=np.int64)
    blocks = limit // period + 1
    offsets = np.arange(blocks, dtype=np.int64) * period
    cands = (offsets[:, None] + residues[None, :]).ravel()
    return cands[cands <= limit]

