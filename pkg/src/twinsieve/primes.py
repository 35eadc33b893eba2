"""Prime infrastructure: Eratosthenes oracle, prime indexing, 6k±1 bookkeeping.

Every prime p >= 5 is of the form 6k-1 or 6k+1; we call k the generator of p
and recover it with kappa(p).  Primes >= 5 therefore split into two residue
classes mod 6 (MINUS for p ≡ 5, PLUS for p ≡ 1).

The table built here is the independent baseline that the generator-level
sieve in `twinsieve.sieve` is cross-checked against, so nothing in this
module may depend on that sieve's logic.  Indexing is 1-based with p_1 = 2.
"""
from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Optional, Union

import numpy as np

from .errors import (
    InsufficientTableError,
    InvalidArgumentError,
    OutOfRangeError,
    TableCacheError,
)

_CACHE_MAGIC = b"TWPT"
_CACHE_VERSION = 1


class PrimeClass(Enum):
    """Residue class mod 6 of a prime >= 5: MINUS for 6k-1, PLUS for 6k+1."""

    MINUS = -1
    PLUS = +1


@dataclass(frozen=True, eq=False)
class PrimeTable:
    """All primes up to `limit`, with O(1) membership lookup.

    `primes` is ascending (p_1 = 2 at index 0); `flags[i]` is True iff i is
    prime.  Instances are immutable after construction and safe to share
    across threads.
    """

    limit: int
    primes: np.ndarray
    flags: np.ndarray

    def __len__(self) -> int:
        return len(self.primes)

    def __contains__(self, n: int) -> bool:
        return self.is_prime(n)

    def is_prime(self, n: int) -> bool:
        if n < 0 or n > self.limit:
            raise InsufficientTableError(
                f"membership query {n} outside table limit {self.limit}"
            )
        return bool(self.flags[n])


def build_prime_table(limit: int) -> PrimeTable:
    """Sieve of Eratosthenes up to `limit` inclusive.

    Raises InvalidArgumentError for limit < 3.
    """
    if limit < 3:
        raise InvalidArgumentError(f"table limit must be >= 3, got {limit}")
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    primes = np.flatnonzero(flags).astype(np.int64)
    flags.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(limit=limit, primes=primes, flags=flags)


def nth_prime(table: PrimeTable, n: int) -> int:
    """The n-th prime, 1-based (p_1 = 2, p_2 = 3, p_3 = 5)."""
    if n < 1:
        raise InvalidArgumentError(f"prime index must be >= 1, got {n}")
    if n > len(table.primes):
        raise OutOfRangeError(
            f"table up to {table.limit} holds only {len(table.primes)} primes, "
            f"index {n} requested"
        )
    return int(table.primes[n - 1])


def prime_count(table: PrimeTable, z: int) -> int:
    """π(z): how many primes are <= z."""
    if z < 1:
        raise InvalidArgumentError(f"prime_count needs z >= 1, got {z}")
    if z > table.limit:
        raise InsufficientTableError(
            f"prime_count({z}) exceeds table limit {table.limit}"
        )
    return int(np.searchsorted(table.primes, z, side="right"))


def p_hat(table: PrimeTable, x: int) -> Optional[int]:
    """Largest prime p >= 5 with p² <= 6x+1, or None if there is none (x <= 3).

    This is the deepest prime whose exclusion rule can say anything about x:
    a composite 6x-1 or 6x+1 has a proper divisor <= sqrt(6x+1).
    """
    if x < 1:
        raise InvalidArgumentError(f"p_hat needs x >= 1, got {x}")
    s = math.isqrt(6 * x + 1)
    if table.limit < s:
        raise InsufficientTableError(
            f"p_hat({x}) needs primes up to {s}, table stops at {table.limit}"
        )
    idx = int(np.searchsorted(table.primes, s, side="right"))
    if idx == 0:
        return None
    p = int(table.primes[idx - 1])
    return p if p >= 5 else None


def kappa(p: int) -> int:
    """Generator of the candidate pair containing p: k with p = 6k∓1.

    (p+1)//6 for p ≡ 5 (mod 6), (p-1)//6 for p ≡ 1 (mod 6).
    """
    r = p % 6
    if p < 5 or r not in (1, 5):
        raise InvalidArgumentError(f"kappa is defined for primes >= 5, got {p}")
    return (p + 1) // 6 if r == 5 else (p - 1) // 6


def prime_class(p: int) -> PrimeClass:
    """MINUS for p ≡ 5 (mod 6), PLUS for p ≡ 1 (mod 6); primes >= 5 only."""
    r = p % 6
    if p < 5 or r not in (1, 5):
        raise InvalidArgumentError(f"prime class is defined for primes >= 5, got {p}")
    return PrimeClass.MINUS if r == 5 else PrimeClass.PLUS


def twin_mask(table: PrimeTable, lo: int, hi: int) -> np.ndarray:
    """Oracle route, vectorized: mask over x in [lo, hi] where both 6x-1 and
    6x+1 are prime by table lookup.  Requires limit >= 6*hi+1."""
    if lo < 1 or lo > hi:
        raise InvalidArgumentError(f"bad range [{lo}, {hi}]")
    if table.limit < 6 * hi + 1:
        raise InsufficientTableError(
            f"oracle needs primes up to {6 * hi + 1}, table stops at {table.limit}"
        )
    xs = np.arange(lo, hi + 1, dtype=np.int64) * 6
    return table.flags[xs - 1] & table.flags[xs + 1]


def table_for_count(count: int) -> PrimeTable:
    """Build a table guaranteed to contain at least `count` primes."""
    if count < 1:
        raise InvalidArgumentError(f"need a positive prime count, got {count}")
    if count < 6:
        limit = 15
    else:
        # p_n < n(ln n + ln ln n) for n >= 6; pad for safety
        limit = int(count * (math.log(count) + math.log(math.log(count))) * 1.15) + 10
    table = build_prime_table(limit)
    while len(table.primes) < count:
        limit = limit * 3 // 2 + 16
        table = build_prime_table(limit)
    return table


def table_with_prime_above(value: int) -> PrimeTable:
    """Build a table containing every prime <= value and at least one beyond."""
    limit = max(value + max(1000, value // 16), 16)
    table = build_prime_table(limit)
    while int(table.primes[-1]) <= value:
        limit = limit * 3 // 2 + 16
        table = build_prime_table(limit)
    return table


def save_prime_table(table: PrimeTable, path: Union[str, Path]) -> None:
    """Write a binary cache: header, limit, checksum, packed odd-number bitmap."""
    odd_flags = table.flags[1::2]
    packed = np.packbits(odd_flags).tobytes()
    digest = hashlib.sha256(packed).digest()
    header = _CACHE_MAGIC + struct.pack(
        "<IQQ", _CACHE_VERSION, table.limit, len(packed)
    )
    Path(path).write_bytes(header + digest + packed)


def load_prime_table(path: Union[str, Path]) -> PrimeTable:
    """Load a cached table, re-verifying the limit and checksum.

    Raises TableCacheError on any mismatch; never returns a partial table.
    """
    raw = Path(path).read_bytes()
    head = 4 + struct.calcsize("<IQQ")
    if len(raw) < head + 32 or raw[:4] != _CACHE_MAGIC:
        raise TableCacheError(f"{path}: not a prime-table cache")
    version, limit, packed_len = struct.unpack("<IQQ", raw[4:head])
    if version != _CACHE_VERSION:
        raise TableCacheError(f"{path}: unsupported cache version {version}")
    packed = raw[head + 32 : head + 32 + packed_len]
    if len(packed) != packed_len:
        raise TableCacheError(f"{path}: truncated bitmap")
    if hashlib.sha256(packed).digest() != raw[head : head + 32]:
        raise TableCacheError(f"{path}: checksum mismatch")
    odd_count = (limit + 1) // 2  # bits for 1, 3, ..., limit (or limit-1)
    if packed_len != (odd_count + 7) // 8:
        raise TableCacheError(f"{path}: bitmap length inconsistent with limit {limit}")
    bits = np.unpackbits(np.frombuffer(packed, dtype=np.uint8), count=odd_count)
    flags = np.zeros(limit + 1, dtype=bool)
    flags[1::2] = bits.astype(bool)
    if limit >= 2:
        flags[2] = True
    if flags[1] or (limit >= 3 and not flags[3]):
        raise TableCacheError(f"{path}: bitmap fails sanity check")
    primes = np.flatnonzero(flags).astype(np.int64)
    flags.setflags(write=False)
    primes.setflags(write=False)
    return PrimeTable(limit=int(limit), primes=primes, flags=flags)
