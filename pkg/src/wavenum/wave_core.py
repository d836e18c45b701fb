"""Natural wave numbers carried as exact rational frequencies.

A wave number of wavelength ``n`` is the periodic sequence of n-th roots of
unity ``exp(2*pi*i*k/n)`` over integer phases ``k``.  Nothing here ever
evaluates a complex exponential: a root of unity is identified by its
frequency ``k/n`` and all arithmetic is done on integer numerators and
denominators.

Frequencies are kept *unreduced* while terms are being combined.  The
circular product takes an ``(m+n)``-th root of the element-wise product, and
that root is only single valued once a branch is fixed; dividing the
phase-proportional numerator ``k*(m+n)`` by ``m+n`` picks the branch that
lands on ``k/(mn)``.  Reducing modulo 1 first would pick a different branch.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CapacityError, DomainError

#: Largest principal part (in terms) that will be materialized on request.
DEFAULT_MATERIALIZE_CAP = 10**7


class Frequency:
    """Exponent fraction of a root of unity, ``numerator / denominator``.

    Structural equality compares the stored (unreduced) pair; use
    :meth:`same_root` for equality of the roots they denote.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, numerator: int, denominator: int):
        if denominator < 1:
            raise DomainError(f"frequency denominator must be >= 1, got {denominator}")
        self.numerator = numerator
        self.denominator = denominator

    def __repr__(self):
        return f"Frequency({self.numerator}, {self.denominator})"

    def __eq__(self, other):
        if not isinstance(other, Frequency):
            return NotImplemented
        return self.numerator == other.numerator and self.denominator == other.denominator

    def __hash__(self):
        return hash((self.numerator, self.denominator))

    def __add__(self, other: Frequency) -> Frequency:
        # exponents add; keep the product denominator so no information about
        # the phase is lost before a later root is taken
        return Frequency(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def scale(self, j: int) -> Frequency:
        return Frequency(j * self.numerator, self.denominator)

    def root(self, e: int) -> Frequency:
        """Frequency of the ``e``-th root on the branch fixed by this numerator."""
        if e < 1:
            raise DomainError(f"root order must be >= 1, got {e}")
        if self.numerator % e == 0:
            return Frequency(self.numerator // e, self.denominator)
        return Frequency(self.numerator, self.denominator * e)

    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def canonical(self) -> Fraction:
        """The frequency reduced modulo 1 and to lowest terms, in ``[0, 1)``."""
        return Fraction(self.numerator % self.denominator, self.denominator)

    def same_root(self, other: Frequency) -> bool:
        d = self.denominator * other.denominator
        return (self.numerator * other.denominator - other.numerator * self.denominator) % d == 0

    def display(self, unreduced: bool = False) -> str:
        if unreduced:
            return f"{self.numerator}/{self.denominator}"
        c = self.canonical()
        if c == 0:
            # exp(2*pi*i*integer) is the root 1
            return "1"
        return f"{c.numerator}/{c.denominator}"


class Term:
    """One value of a wave-number sequence: zero or a root of unity."""

    __slots__ = ("frequency",)

    def __init__(self, frequency: Frequency | None):
        self.frequency = frequency

    @classmethod
    def root(cls, numerator: int, denominator: int) -> Term:
        return cls(Frequency(numerator, denominator))

    @property
    def is_zero(self) -> bool:
        return self.frequency is None

    def __repr__(self):
        if self.frequency is None:
            return "Zero"
        return f"Root({self.frequency.numerator}/{self.frequency.denominator})"

    def __str__(self):
        return self.display()

    def display(self, unreduced: bool = False) -> str:
        if self.frequency is None:
            return "0"
        return self.frequency.display(unreduced)

    def __eq__(self, other):
        if not isinstance(other, Term):
            return NotImplemented
        if self.frequency is None or other.frequency is None:
            return self.frequency is None and other.frequency is None
        return self.frequency.same_root(other.frequency)

    def __hash__(self):
        if self.frequency is None:
            return hash(None)
        return hash(self.frequency.canonical())

    def __mul__(self, other: Term) -> Term:
        if self.frequency is None or other.frequency is None:
            return ZERO
        return Term(self.frequency + other.frequency)

    def __add__(self, other: Term) -> Term:
        if self.frequency is None:
            return other
        if other.frequency is None:
            return self
        raise DomainError("the sum of two roots of unity is not a root of unity")

    def power_root(self, e: int) -> Term:
        if self.frequency is None:
            return ZERO
        return Term(self.frequency.root(e))


ZERO = Term(None)


class DecompositionKind(enum.Enum):
    PLAIN = "plain"
    STAR = "star"
    CIRCLE = "circle"


PLAIN = DecompositionKind.PLAIN
STAR = DecompositionKind.STAR
CIRCLE = DecompositionKind.CIRCLE


def _check_wavelength(n: int) -> None:
    if n < 1:
        raise DomainError(f"wavelength must be a natural number, got {n}")


def term_at(n: int, k: int, kind: DecompositionKind = PLAIN) -> Term:
    """Value of ``u_n`` (or its star/circle function) at phase ``k``.

    ``k = 0`` counts as a multiple of every wavelength.
    """
    if n < 1:
        raise DomainError(f"wavelength must be a natural number, got {n}")
    if kind is PLAIN:
        return Term(Frequency(k, n))
    divides = k % n == 0
    if kind is STAR:
        return ZERO if divides else Term(Frequency(k, n))
    if kind is CIRCLE:
        return Term(Frequency(k, n)) if divides else ZERO
    raise DomainError(f"unknown decomposition kind {kind!r}")


def principal_part(
    n: int,
    m: int = 1,
    kind: DecompositionKind = PLAIN,
    cap: int = DEFAULT_MATERIALIZE_CAP,
) -> tuple[Term, ...]:
    """Terms for phases ``1..m*n``."""
    _check_wavelength(n)
    if m < 1:
        raise DomainError(f"repetition count must be >= 1, got {m}")
    if m * n > cap:
        raise CapacityError(f"principal part of {m * n} terms exceeds cap {cap}")
    return tuple(term_at(n, k, kind) for k in range(1, m * n + 1))


def translate(n: int, j: int, k: int) -> Term:
    """Phase ``k`` of ``u_n`` raised to the integer power ``j``."""
    _check_wavelength(n)
    return Term(Frequency(k, n).scale(j))


def translation_period(n: int, j: int) -> int:
    _check_wavelength(n)
    return n // math.gcd(j, n)


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of ``n`` as sorted ``(prime, exponent)`` pairs."""
    if n < 1:
        raise DomainError(f"cannot factor {n}")
    out = []
    for p in (2, 3):
        if n % p == 0:
            a = 0
            while n % p == 0:
                n //= p
                a += 1
            out.append((p, a))
    d = 5
    step = 2
    while d * d <= n:
        if n % d == 0:
            a = 0
            while n % d == 0:
                n //= d
                a += 1
            out.append((d, a))
        d += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class WaveNumber:
    """``u_n`` in factored form; terms are evaluated on demand."""

    wavelength: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_wavelength(self.wavelength)
        prod = 1
        for p, a in self.factors:
            prod *= p**a
        if prod != self.wavelength:
            raise DomainError(
                f"factors {self.factors} do not multiply to wavelength {self.wavelength}"
            )

    def term_at(self, k: int, kind: DecompositionKind = PLAIN) -> Term:
        return term_at(self.wavelength, k, kind)

    def principal_part(
        self, m: int = 1, kind: DecompositionKind = PLAIN, cap: int = DEFAULT_MATERIALIZE_CAP
    ) -> tuple[Term, ...]:
        return principal_part(self.wavelength, m, kind, cap)

    @property
    def is_prime(self) -> bool:
        return len(self.factors) == 1 and self.factors[0][1] == 1

    def prime_factors(self) -> list[WaveNumber]:
        """Prime wave numbers whose circular product is this one, with multiplicity."""
        return [to_wave(p) for p, a in self.factors for _ in range(a)]


def _merge_factors(parts: Iterable[tuple[tuple[int, int], ...]]) -> tuple[tuple[int, int], ...]:
    c: Counter[int] = Counter()
    for fs in parts:
        for p, a in fs:
            c[p] += a
    return tuple(sorted(c.items()))


def to_wave(n: int) -> WaveNumber:
    _check_wavelength(n)
    return WaveNumber(n, factorize(n))


def from_wave(u: WaveNumber) -> int:
    return u.wavelength


def circular_product(a: WaveNumber, b: WaveNumber) -> WaveNumber:
    return WaveNumber(a.wavelength * b.wavelength, _merge_factors((a.factors, b.factors)))


def circular_product_many(waves: Sequence[WaveNumber]) -> WaveNumber:
    if not waves:
        raise DomainError("circular product of an empty list (pass u_1 explicitly)")
    period = 1
    for w in waves:
        period *= w.wavelength
    return WaveNumber(period, _merge_factors(w.factors for w in waves))


def circular_product_term(
    a: WaveNumber | int,
    b: WaveNumber | int,
    k: int,
    kind_a: DecompositionKind = PLAIN,
    kind_b: DecompositionKind = PLAIN,
) -> Term:
    """Phase ``k`` of ``a (.) b`` built element-wise.

    Multiplies the two operand terms at ``k`` and takes the ``(m+n)``-th root
    on the branch fixed by the unreduced frequency.
    """
    m = a if isinstance(a, int) else a.wavelength
    n = b if isinstance(b, int) else b.wavelength
    fa = term_at(m, k, kind_a).frequency
    fb = term_at(n, k, kind_b).frequency
    if fa is None or fb is None:
        return ZERO
    return Term((fa + fb).root(m + n))


def circular_product_many_term(
    waves: Sequence[WaveNumber | int],
    k: int,
    kinds: Sequence[DecompositionKind] | None = None,
) -> Term:
    """Phase ``k`` of the N-fold circular product built element-wise.

    The exponent is ``1 / sum(P / n_i)`` with ``P`` the product of wavelengths.
    """
    if not waves:
        raise DomainError("circular product of an empty list (pass u_1 explicitly)")
    lengths = [w if isinstance(w, int) else w.wavelength for w in waves]
    if kinds is None:
        kinds = [PLAIN] * len(lengths)
    if len(kinds) != len(lengths):
        raise DomainError("one decomposition kind per operand is required")
    period = math.prod(lengths)
    acc = Term(Frequency(0, 1))
    for n, kind in zip(lengths, kinds):
        acc = acc * term_at(n, k, kind)
        if acc.is_zero:
            return ZERO
    return acc.power_root(sum(period // n for n in lengths))


_I64_LIMIT = 1 << 62


def _int_array(values, bound: int) -> np.ndarray:
    # int64 while every intermediate stays below 2**62, Python ints otherwise
    return np.asarray(values, dtype=np.int64 if bound < _I64_LIMIT else object)


def circular_product_batch(
    m: int,
    n: int,
    ks,
    kind_a: DecompositionKind = PLAIN,
    kind_b: DecompositionKind = PLAIN,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """:func:`circular_product_term` over many phases at once.

    Returns ``(numerators, denominators, nonzero)``; entries where
    ``nonzero`` is False are Zero terms and their frequency is meaningless.
    """
    _check_wavelength(m)
    _check_wavelength(n)
    ks = list(ks)
    e = m + n
    kmax = max((abs(int(k)) for k in ks), default=0)
    k = _int_array(ks, max(kmax, 1) * e * m * n)
    nonzero = np.ones(len(ks), dtype=bool)
    for length, kind in ((m, kind_a), (n, kind_b)):
        if kind is STAR:
            nonzero &= k % length != 0
        elif kind is CIRCLE:
            nonzero &= k % length == 0
    num = k * n + k * m
    exact = num % e == 0
    num = np.where(exact, num // e, num)
    base = np.full(len(ks), m * n, dtype=k.dtype)
    den = np.where(exact, base, base * e)
    return num, den, nonzero


def same_roots(num1, den1, num2, den2) -> np.ndarray:
    """Element-wise :meth:`Frequency.same_root` over integer arrays."""
    arrays = [np.asarray(a) for a in (num1, den1, num2, den2)]
    bound = max(int(np.abs(a).max()) if a.size else 0 for a in arrays)
    if bound * bound >= _I64_LIMIT:
        arrays = [a.astype(object) for a in arrays]
    n1, d1, n2, d2 = arrays
    return (n1 * d2 - n2 * d1) % (d1 * d2) == 0


def four_term_expansion(m: int, n: int, k: int) -> tuple[Term, Term, Term, Term]:
    """Star/circle split of ``u_m (.) u_n`` at phase ``k``.

    Order: circle(.)circle, circle(.)star, star(.)circle, star(.)star.
    """
    _check_wavelength(m)
    _check_wavelength(n)
    return (
        circular_product_term(m, n, k, CIRCLE, CIRCLE),
        circular_product_term(m, n, k, CIRCLE, STAR),
        circular_product_term(m, n, k, STAR, CIRCLE),
        circular_product_term(m, n, k, STAR, STAR),
    )


def term_sum(terms: Iterable[Term]) -> Term:
    """Element-wise arithmetic sum of terms, at most one of which is nonzero."""
    acc = ZERO
    for t in terms:
        acc = acc + t
    return acc
