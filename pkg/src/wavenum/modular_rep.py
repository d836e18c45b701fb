"""Modular phase functions and the weighted-residue circular product.

A modular phase value replaces the frequency ``k/n`` by ``(k mod n)/n``.
The modular circular product of co-numbers over distinct primes combines
the residues as ``(sum_i (P/p_i) * (k mod p_i)) mod P``.  That sum is a
Chinese-remainder style reconstruction: it is ``k mod P`` itself only when
every weight ``P/p_i`` is congruent to 1 modulo ``p_i``.  Otherwise it
permutes the unit residues, and the equality filter built on it no longer
selects the primes.  Both sets are computed here so the difference is visible.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import asdict, dataclass
from fractions import Fraction

from . import oracle
from .errors import DomainError


@dataclass(frozen=True)
class ModularFrequency:
    """``residue/period``, or Blank (``residue is None``) at a co-number zero."""

    residue: int | None
    period: int

    def __post_init__(self):
        if self.period < 1:
            raise DomainError(f"period must be >= 1, got {self.period}")
        if self.residue is not None and not 0 <= self.residue < self.period:
            raise DomainError(f"residue {self.residue} not in [0, {self.period})")

    @property
    def is_blank(self) -> bool:
        return self.residue is None

    def display(self) -> str:
        if self.residue is None:
            return "□"
        return f"{self.residue}/{self.period}"

    def __str__(self):
        return self.display()


def blank(period: int) -> ModularFrequency:
    return ModularFrequency(None, period)


def modular_phase_value(n: int, k: int, starred: bool = False) -> ModularFrequency:
    if n < 1:
        raise DomainError(f"wavelength must be >= 1, got {n}")
    r = k % n
    if starred and r == 0:
        return blank(n)
    return ModularFrequency(r, n)


@dataclass(frozen=True)
class ModularCoProduct:
    primes: tuple[int, ...]

    def __post_init__(self):
        ps = tuple(int(p) for p in self.primes)
        object.__setattr__(self, "primes", ps)
        if not ps:
            raise DomainError("need at least one prime")
        if len(set(ps)) != len(ps):
            raise DomainError(f"duplicate primes {ps}: wavelengths must be pairwise coprime")
        bad = [p for p in ps if not oracle.is_prime(p)]
        if bad:
            raise DomainError(f"not prime: {bad}")

    @property
    def period(self) -> int:
        return math.prod(self.primes)

    @property
    def weights(self) -> tuple[int, ...]:
        P = self.period
        return tuple(P // p for p in self.primes)

    def value(self, k: int) -> ModularFrequency:
        return modular_product_value(self, k)


def modular_product_value(mcp: ModularCoProduct, k: int) -> ModularFrequency:
    if k < 1:
        raise DomainError(f"phase must be >= 1, got {k}")
    P = mcp.period
    total = 0
    for p, w in zip(mcp.primes, mcp.weights):
        r = k % p
        if r == 0:
            return blank(P)
        total += w * r
    return ModularFrequency(total % P, P)


def weights_idempotent_check(primes) -> bool:
    """True iff ``P/p_i = 1 (mod p_i)`` for every prime."""
    mcp = ModularCoProduct(tuple(primes))
    return all(w % p == 1 for p, w in zip(mcp.primes, mcp.weights))


def identity_holds(primes) -> bool:
    """Whether the weighted sum equals ``k mod P`` at every non-Blank phase of one period."""
    mcp = ModularCoProduct(tuple(primes))
    P = mcp.period
    for k in range(1, P + 1):
        v = modular_product_value(mcp, k)
        if not v.is_blank and v.residue != k % P:
            return False
    return True


def zeta_proportion(primes) -> Fraction:
    """Finite Euler product ``prod (p-1)/p``."""
    ps = ModularCoProduct(tuple(primes)).primes
    out = Fraction(1)
    for p in ps:
        out *= Fraction(p - 1, p)
    return out


def nonblank_density(primes) -> Fraction:
    """Non-Blank share of one period, counted phase by phase."""
    mcp = ModularCoProduct(tuple(primes))
    P = mcp.period
    hits = sum(1 for k in range(1, P + 1) if not modular_product_value(mcp, k).is_blank)
    return Fraction(hits, P)


def unit_permutation_check(primes) -> bool:
    """Non-Blank values over one period hit every unit residue exactly once."""
    mcp = ModularCoProduct(tuple(primes))
    P = mcp.period
    values = [modular_product_value(mcp, k) for k in range(1, P + 1)]
    residues = sorted(v.residue for v in values if not v.is_blank)
    units = [r for r in range(P) if math.gcd(r, P) == 1]
    return residues == units


@dataclass(frozen=True)
class Table1Column:
    k: int
    rows: tuple[ModularFrequency, ...]
    product: ModularFrequency

    def cells(self) -> list[str]:
        return [r.display() for r in self.rows] + [self.product.display()]


def table1(primes=(2, 3, 5)) -> list[Table1Column]:
    """Starred modular rows and their product for ``k = 1..P``."""
    mcp = ModularCoProduct(tuple(primes))
    cols = []
    for k in range(1, mcp.period + 1):
        rows = tuple(modular_phase_value(p, k, starred=True) for p in mcp.primes)
        cols.append(Table1Column(k, rows, modular_product_value(mcp, k)))
    return cols


# Reference fixture: rows for 2, 3, 5 and the product row,
# columns k = 1..30 ("#" marks a blank cell).
_B = "#"
TABLE1_EXPECTED: dict[str, tuple[str, ...]] = {
    "2": ("1/2", _B) * 15,
    "3": ("1/3", "2/3", _B) * 10,
    "5": ("1/5", "2/5", "3/5", "4/5", _B) * 6,
    "product": (
        "1/30", _B, _B, _B, _B, _B, "7/30", _B, _B, _B,
        "11/30", _B, "13/30", _B, _B, _B, "17/30", _B, "19/30", _B,
        _B, _B, "23/30", _B, _B, _B, _B, _B, "29/30", _B,
    ),
}


def check_table1(columns: list[Table1Column] | None = None) -> list[str]:
    """Differences between the computed table and the stored fixture; empty when exact."""
    if columns is None:
        columns = table1()
    problems = []
    if len(columns) != 30:
        return [f"expected 30 columns, got {len(columns)}"]
    keys = ("2", "3", "5", "product")
    for col in columns:
        for key, cell in zip(keys, col.cells()):
            want = TABLE1_EXPECTED[key][col.k - 1]
            got = "#" if cell == "□" else cell
            if got != want:
                problems.append(f"k={col.k} row {key}: got {cell}, expected {want}")
    return problems


def check_coprime_table(primes, columns: list[Table1Column] | None = None) -> list[str]:
    """Fixture-free check for any prime set: product non-Blank exactly at units."""
    mcp = ModularCoProduct(tuple(primes))
    if columns is None:
        columns = table1(mcp.primes)
    problems = []
    for col in columns:
        unit = math.gcd(col.k, mcp.period) == 1
        if unit == col.product.is_blank:
            problems.append(f"k={col.k}: product {col.product.display()}")
    return problems


@dataclass(frozen=True)
class Theorem9Report:
    """Equality filter versus non-Blank filter for one prime set.

    ``equality_phases``/``nonzero_phases`` cover ``[p_{N+1}, min(P_N, p_{N+1}**2))``,
    the overlap of the period range and the prime window.  The ``window_*``
    fields cover the whole window ``[p_{N+1}, p_{N+1}**2)`` with the equality
    read modulo ``P_N``.
    """

    primes: tuple[int, ...]
    next_prime: int
    period: int
    lo: int
    hi: int
    equality_phases: tuple[int, ...]
    nonzero_phases: tuple[int, ...]
    agreement: bool
    window_hi: int
    window_equality_phases: tuple[int, ...]
    window_nonzero_phases: tuple[int, ...]
    window_agreement: bool
    oracle_primes: tuple[int, ...]
    weights_idempotent: bool

    @property
    def nonzero_matches_oracle(self) -> bool:
        window_oracle = tuple(p for p in self.oracle_primes if p < self.hi)
        return (
            self.window_nonzero_phases == self.oracle_primes
            and self.nonzero_phases == window_oracle
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        for key, val in d.items():
            if isinstance(val, tuple):
                d[key] = list(val)
        d["nonzero_matches_oracle"] = self.nonzero_matches_oracle
        return d


def theorem9_filter(primes, next_prime: int) -> Theorem9Report:
    """Phases selected by the residue-equality condition versus by non-Blank values."""
    mcp = ModularCoProduct(tuple(primes))
    if next_prime <= mcp.primes[-1]:
        raise DomainError(f"next prime {next_prime} must exceed {mcp.primes[-1]}")
    P = mcp.period
    lo, window_hi = next_prime, next_prime * next_prime
    hi = min(P, window_hi)
    eq, nz = [], []
    for k in range(lo, window_hi):
        v = modular_product_value(mcp, k)
        if v.is_blank:
            continue
        nz.append(k)
        if v.residue == k % P:
            eq.append(k)
    expected = oracle.cached_sieve(window_hi - 1).primes_in(lo, window_hi)
    eq_t = tuple(k for k in eq if k < hi)
    nz_t = tuple(k for k in nz if k < hi)
    return Theorem9Report(
        primes=mcp.primes,
        next_prime=next_prime,
        period=P,
        lo=lo,
        hi=hi,
        equality_phases=eq_t,
        nonzero_phases=nz_t,
        agreement=eq_t == nz_t,
        window_hi=window_hi,
        window_equality_phases=tuple(eq),
        window_nonzero_phases=tuple(nz),
        window_agreement=eq == nz,
        oracle_primes=tuple(expected),
        weights_idempotent=weights_idempotent_check(mcp.primes),
    )


def theorem9_for_first(N: int) -> Theorem9Report:
    ps = oracle.first_primes(N + 1)
    return theorem9_filter(ps[:-1], ps[-1])


def prime_subsets(pool=(2, 3, 5, 7, 11, 13)):
    """Every non-empty subset of ``pool``, smallest first."""
    for r in range(1, len(pool) + 1):
        yield from itertools.combinations(pool, r)
