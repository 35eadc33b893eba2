"""The generator-level twin sieve.

A twin-prime generator is an x >= 1 with 6x-1 and 6x+1 both prime.  For a
prime p >= 5 with generator k = kappa(p), p divides 6x-1 or 6x+1 exactly when
x ≡ ±k (mod p), which folds into the single quadratic test

    psi(x, p) = (x² - kappa(p)²) mod p == 0.

Unlike Eratosthenes, exclusion is keyed on x² rather than x.  Each prime
p_n (n >= 3, so p_3 = 5 is the first sieving prime) only ever has to act for
x >= origin(p_n) = (p_n² - 1)/6, the first x whose pair 6x±1 can contain p_n²
as a factor bound; the sieve for p_n opens there with psi = 0.

Per period of length p each sieve has exactly two zero positions ("bars"):
an a-bar where x ≡ -kappa (mod p) and a b-bar where x ≡ +kappa, always
2*kappa(p) apart.  The position function tau(x, p) = (x + kappa(p)) mod p
locates x inside the period: tau = 0 at an a-bar, tau = 2*kappa at a b-bar,
and psi = tau * (tau - 2*kappa) mod p.

Two membership tests are exposed on purpose and must agree everywhere:
`twin_by_sieve` (the criteria above, capped at p_hat(x)) and
`twin_by_primality` (direct table lookup of 6x±1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, List, Tuple

import numpy as np

from .errors import InsufficientTableError, InvalidArgumentError
from .primes import (
    PrimeClass,
    PrimeTable,
    kappa,
    nth_prime,
    p_hat,
    prime_class,
    prime_count,
)

FIRST_SIEVE_INDEX = 3  # sieves exist for p_n >= 5 only

DEFAULT_SEGMENT = 1 << 22


class BarKind(Enum):
    """Classification of a position under one sieve: a-bar, b-bar or neither."""

    A_BAR = "a"
    B_BAR = "b"
    NONE = "none"


@dataclass(frozen=True)
class Interval:
    """Inclusive integer range [lo, hi] with lo >= 1."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo < 1 or self.lo > self.hi:
            raise InvalidArgumentError(f"bad interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> int:
        return self.hi - self.lo + 1

    def __contains__(self, x: int) -> bool:
        return self.lo <= x <= self.hi


@dataclass(frozen=True)
class SieveFrame:
    """Everything about sieve number n: its prime, class, generator, origin
    and the joint period length of sieves 3..n."""

    n: int
    p: int
    prime_class: PrimeClass
    kappa: int
    origin: int
    reduced_primorial: int


def origin(p: int) -> int:
    """First x at which the sieve for p acts: (p² - 1)/6.

    p² - 1 is divisible by 6 for every prime p >= 5.
    """
    kappa(p)  # domain check
    return (p * p - 1) // 6


def psi(x: int, p: int) -> int:
    """Sieve value (x² - kappa(p)²) mod p, in [0, p-1].

    Computed on reduced residues, so exact for any machine-width x.
    """
    k = kappa(p)
    xr = x % p
    return (xr * xr - k * k) % p


def tau(x: int, p: int) -> int:
    """Position of x in the sieve period: (x + kappa(p)) mod p."""
    return (x + kappa(p)) % p


def bar_kind(x: int, p: int) -> BarKind:
    """A_BAR iff x ≡ -kappa(p) (mod p), B_BAR iff x ≡ +kappa(p), else NONE."""
    k = kappa(p)
    t = (x + k) % p
    if t == 0:
        return BarKind.A_BAR
    if t == 2 * k:
        return BarKind.B_BAR
    return BarKind.NONE


def _require_index(table: PrimeTable, n: int) -> None:
    if n < FIRST_SIEVE_INDEX:
        raise InvalidArgumentError(f"sieve index must be >= 3, got {n}")
    if n > len(table.primes):
        raise InsufficientTableError(
            f"sieve index {n} beyond table ({len(table.primes)} primes)"
        )


def reduced_primorial(table: PrimeTable, n: int) -> int:
    """Product p_3 * p_4 * ... * p_n = 5·7·...·p_n (the full primorial / 6)."""
    _require_index(table, n)
    out = 1
    for p in table.primes[2:n]:
        out *= int(p)
    return out


def frame(table: PrimeTable, n: int) -> SieveFrame:
    """Populate the full frame for sieve n."""
    _require_index(table, n)
    p = nth_prime(table, n)
    return SieveFrame(
        n=n,
        p=p,
        prime_class=prime_class(p),
        kappa=kappa(p),
        origin=origin(p),
        reduced_primorial=reduced_primorial(table, n),
    )


def aggregate_psi(table: PrimeTable, x: int, n: int) -> Fraction:
    """Product of psi(x, p_i)/p_i over i = 3..n, as an exact rational in [0, 1).

    Zero as soon as any factor is zero; nonzero values are exact.
    """
    _require_index(table, n)
    num = 1
    den = 1
    for p in table.primes[2:n]:
        p = int(p)
        v = psi(x, p)
        if v == 0:
            return Fraction(0)
        num *= v
        den *= p
    return Fraction(num, den)


def aggregate_psi_hat(table: PrimeTable, x: int) -> Fraction:
    """Aggregate sieve value at per-x depth p_hat(x).

    For x <= 3 no sieve is active and the empty product is 1.
    """
    ph = p_hat(table, x)
    if ph is None:
        return Fraction(1)
    return aggregate_psi(table, x, prime_count(table, ph))


def a_section(table: PrimeTable, n: int) -> Tuple[Interval, int]:
    """Interval [O_n, O_{n+1} - 1] on which the active sieve set is exactly
    3..n, plus its length d_n.

    Consecutive sections tile the integers >= 4.  d_n is pinned between
    2(p_n + 1)/3 (even prime gaps) and p_n²/2 (from p_{n+1} < 2 p_n).
    """
    _require_index(table, n)
    p = nth_prime(table, n)
    p_next = nth_prime(table, n + 1)
    lo = origin(p)
    hi = origin(p_next) - 1
    d = hi - lo + 1
    assert 3 * d >= 2 * (p + 1), f"section length {d} below bound at n={n}"
    assert 2 * d < p * p, f"section length {d} above bound at n={n}"
    return Interval(lo, hi), d


def period_section(table: PrimeTable, n: int) -> Interval:
    """One full joint period of sieves 3..n starting at the origin of sieve n."""
    fr = frame(table, n)
    return Interval(fr.origin, fr.origin + fr.reduced_primorial - 1)


def is_omega(table: PrimeTable, x: int, n: int) -> bool:
    """True iff x survives every sieve 3..n, i.e. psi(x, p_i) != 0 for all.

    Equivalent to gcd(36x² - 1, reduced_primorial(n)) == 1.
    """
    _require_index(table, n)
    for p in table.primes[2:n]:
        if psi(x, int(p)) == 0:
            return False
    return True


def twin_by_sieve(table: PrimeTable, x: int) -> bool:
    """Sieve-criteria route: x is a twin generator iff no prime p_n with
    3 <= n <= π(p_hat(x)) has x ≡ ±kappa(p_n) (mod p_n).

    For x <= 3 the criteria set is empty and the answer is True.
    """
    if x < 1:
        raise InvalidArgumentError(f"generator candidates start at 1, got {x}")
    s = math.isqrt(6 * x + 1)
    if table.limit < s:
        raise InsufficientTableError(
            f"twin_by_sieve({x}) needs primes up to {s}, table stops at {table.limit}"
        )
    for p in table.primes[2:]:
        p = int(p)
        if p > s:
            break
        k = (p + 1) // 6 if p % 6 == 5 else (p - 1) // 6
        r = x % p
        if r == k or r == p - k:
            return False
    return True


def twin_by_primality(table: PrimeTable, x: int) -> bool:
    """Oracle route: both 6x-1 and 6x+1 prime by table lookup."""
    if x < 1:
        raise InvalidArgumentError(f"generator candidates start at 1, got {x}")
    if table.limit < 6 * x + 1:
        raise InsufficientTableError(
            f"twin_by_primality({x}) needs table limit {6 * x + 1}, "
            f"have {table.limit}"
        )
    return table.is_prime(6 * x - 1) and table.is_prime(6 * x + 1)


def twin_sieve_mask(table: PrimeTable, span: Interval) -> np.ndarray:
    """Vectorized twin_by_sieve over a whole interval.

    Marks the two excluded residues of every prime, starting no earlier than
    the prime's origin — below origin(p) the sieve for p is not active, which
    is what keeps x = kappa(p) (the pair containing p itself) alive.
    """
    lo, hi = span.lo, span.hi
    s = math.isqrt(6 * hi + 1)
    if table.limit < s:
        raise InsufficientTableError(
            f"range sieve to {hi} needs primes up to {s}, table stops at {table.limit}"
        )
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in table.primes[2:]:
        p = int(p)
        if p > s:  # origin(p) > hi from here on
            break
        k = (p + 1) // 6 if p % 6 == 5 else (p - 1) // 6
        start = max(lo, (p * p - 1) // 6)
        if start > hi:
            continue
        for r in (k, p - k):
            first = start + (r - start) % p
            if first <= hi:
                mask[first - lo :: p] = False
    return mask


def enumerate_twin_generators(table: PrimeTable, span: Interval) -> List[int]:
    """All twin-prime generators in `span`, ascending."""
    out: List[int] = []
    for seg_lo, seg_hi in _segments(span.lo, span.hi, DEFAULT_SEGMENT):
        mask = twin_sieve_mask(table, Interval(seg_lo, seg_hi))
        out.extend(int(v) for v in np.flatnonzero(mask) + seg_lo)
    return out


def omega_mask(table: PrimeTable, n: int, lo: int, hi: int) -> np.ndarray:
    """Survivor mask of sieves 3..n over [lo, hi] (fixed depth, no origins:
    the omega property is a pure residue condition)."""
    _require_index(table, n)
    if lo < 1 or lo > hi:
        raise InvalidArgumentError(f"bad range [{lo}, {hi}]")
    mask = np.ones(hi - lo + 1, dtype=bool)
    for p in table.primes[2:n]:
        p = int(p)
        k = (p + 1) // 6 if p % 6 == 5 else (p - 1) // 6
        for r in (k, p - k):
            first = lo + (r - lo) % p
            if first <= hi:
                mask[first - lo :: p] = False
    return mask


def enumerate_omega(table: PrimeTable, n: int, span: Interval) -> List[int]:
    """All survivors of sieves 3..n in `span`, ascending.

    Residue marking per prime, segmented; cost is O(length · Σ 2/p_i), not
    per-x trial.  Disjoint subranges can be processed independently and
    concatenated in order.
    """
    out: List[int] = []
    for seg_lo, seg_hi in _segments(span.lo, span.hi, DEFAULT_SEGMENT):
        mask = omega_mask(table, n, seg_lo, seg_hi)
        out.extend(int(v) for v in np.flatnonzero(mask) + seg_lo)
    return out


def _segments(lo: int, hi: int, size: int) -> Iterator[Tuple[int, int]]:
    a = lo
    while a <= hi:
        yield a, min(a + size - 1, hi)
        a += size
