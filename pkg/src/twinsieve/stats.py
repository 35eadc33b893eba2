"""Counting and verification layer over the twin sieve.

Per joint period of sieves 3..n (length = reduced primorial of p_n) the
survivor count is exactly phi(p_n) = Π(p_i - 2): each prime knocks out two
residues.  From that follow the survivor density eta = phi / primorial, the
exact mean cyclic gap delta_bar = 1/eta, and a family of inequalities
(eta >= 3/p, 2·delta_bar < d_n, and for p > 200 delta_bar² < p and < d_n)
that this module audits with exact rational arithmetic — no floats anywhere
near an assertion.

Full-period scans (censuses, gap histograms, bar counts, symmetry) walk the
period in segments; partial results merge associatively, so segments may be
processed by a thread pool.  Scans refuse n above FEASIBLE_N unless forced.
"""
from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from .errors import FeasibilityError, InsufficientTableError, InvalidArgumentError
from .primes import PrimeTable, kappa, nth_prime
from .sieve import (
    BarKind,
    Interval,
    bar_kind,
    frame,
    omega_mask,
    origin,
    period_section,
    twin_sieve_mask,
    _require_index,
    _segments,
)

FEASIBLE_N = 9  # largest n whose full period (37,182,145) scans by default

DEFAULT_SEGMENT = 1 << 22

# comparison flags used in inequality audits
STRICT = "strict"
EQUAL = "equal"
VIOLATED = "violated"

_T = TypeVar("_T")


@dataclass(frozen=True)
class CensusReport:
    n: int
    p: int
    expected: int
    observed: int
    match: bool


@dataclass(frozen=True)
class BoundsRow:
    """Exact inequality audit for one sieve depth.

    `density_flag`: eta vs 3/p (strict means eta > 3/p).
    `spacing_flag`: 2·delta_bar vs d_n (strict means <).
    `sq_p_flag` / `sq_d_flag`: delta_bar² vs p and vs d_n, only for p > 200.
    """

    n: int
    p: int
    eta: Fraction
    three_over_p: Fraction
    delta_bar: Fraction
    d_n: int
    density_flag: str
    spacing_flag: str
    sq_p_flag: Optional[str]
    sq_d_flag: Optional[str]


@dataclass(frozen=True)
class GapHistogram:
    """Cyclic gaps between consecutive survivors over one full period.

    The wrap-around gap (last survivor to first survivor of the next period)
    is included, so the gaps sum to the period length and their exact mean is
    delta_bar.
    """

    n: int
    gaps: Dict[int, int]
    total_gaps: int
    mean: Fraction


@dataclass(frozen=True)
class BarEvent:
    """A survivor of sieves 3..n-1 struck by sieve n."""

    x: int
    n_new: int
    kind: BarKind


@dataclass(frozen=True)
class MergedGapReport:
    """Effect of the newest sieve's strikes on the gap structure of its period.

    Each strike removes a survivor and fuses its two neighbouring gaps; the
    accounting mean for fused gaps is D = 2·delta_bar(previous depth).
    Adjacent strikes fuse more than two gaps, so the empirical mean is
    reported next to the prediction rather than asserted equal.
    """

    n_new: int
    bar_count: int
    merged_gap_count: int
    merged_total_length: int
    mean: Fraction
    predicted: Fraction
    deviation: Fraction


@dataclass(frozen=True)
class OverlapReport:
    """How far one period section reaches across later A-sections.

    terminal_index t is the A-section containing the period's last position
    (O_t <= period_end < O_{t+1}); spanned_sections counts the A-sections
    beyond A_n that the period reaches over, t - n.
    """

    n: int
    period_end: int
    terminal_index: int
    spanned_sections: int


@dataclass(frozen=True)
class ProbeReport:
    """Twin-generator counts per A-section over a range of sieve depths."""

    n_lo: int
    n_hi: int
    counts: List[Tuple[int, int]]
    empty_sections: List[int] = field(default_factory=list)


def phi(table: PrimeTable, n: int) -> int:
    """Survivors per full period of sieves 3..n: Π_{i=3..n} (p_i - 2)."""
    _require_index(table, n)
    out = 1
    for p in table.primes[2:n]:
        out *= int(p) - 2
    return out


def eta(table: PrimeTable, n: int) -> Fraction:
    """Survivor density phi / reduced primorial, in lowest terms."""
    _require_index(table, n)
    num = 1
    den = 1
    for p in table.primes[2:n]:
        num *= int(p) - 2
        den *= int(p)
    return Fraction(num, den)


def delta_bar(table: PrimeTable, n: int) -> Fraction:
    """Exact mean cyclic gap between survivors: 1/eta."""
    return 1 / eta(table, n)


def _flag_less(a, b) -> str:
    if a < b:
        return STRICT
    if a == b:
        return EQUAL
    return VIOLATED


def bound_report(table: PrimeTable, n_max: int) -> List[BoundsRow]:
    """Audit the density and spacing inequalities for n = 3..n_max.

    Pure rational arithmetic from running products; needs p_{n_max+1} for the
    section lengths.  The density bound is audited as eta >= 3/p with an
    equality flag: the product telescopes to exactly 3/p at p in {5, 7}.
    """
    _require_index(table, n_max)
    nth_prime(table, n_max + 1)  # fail early if d_n cannot be formed
    rows: List[BoundsRow] = []
    ph = 1
    prim = 1
    for n in range(3, n_max + 1):
        p = nth_prime(table, n)
        ph *= p - 2
        prim *= p
        e = Fraction(ph, prim)
        db = Fraction(prim, ph)
        d_n = origin(nth_prime(table, n + 1)) - origin(p)
        density = _flag_less(Fraction(3, p), e)  # strict iff eta > 3/p
        spacing = _flag_less(2 * db, d_n)
        sq_p = _flag_less(db * db, p) if p > 200 else None
        sq_d = _flag_less(db * db, d_n) if p > 200 else None
        rows.append(
            BoundsRow(
                n=n,
                p=p,
                eta=e,
                three_over_p=Fraction(3, p),
                delta_bar=db,
                d_n=d_n,
                density_flag=density,
                spacing_flag=spacing,
                sq_p_flag=sq_p,
                sq_d_flag=sq_d,
            )
        )
    return rows


def _check_feasible(n: int, force: bool) -> None:
    if n > FEASIBLE_N and not force:
        raise FeasibilityError(
            f"full-period scan at n={n} exceeds the desk-scale bound "
            f"n <= {FEASIBLE_N}; pass force=True (CLI: --force) to run anyway"
        )


def _map_segments(
    fn: Callable[[Tuple[int, int]], _T],
    segments: Sequence[Tuple[int, int]],
    threads: int,
) -> List[_T]:
    """Apply fn to segments, optionally on a thread pool, preserving order."""
    if threads <= 1 or len(segments) <= 1:
        return [fn(s) for s in segments]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, segments))


def period_census(
    table: PrimeTable,
    n: int,
    *,
    force: bool = False,
    threads: int = 1,
    segment: int = DEFAULT_SEGMENT,
) -> CensusReport:
    """Count survivors over one full period and compare with phi(p_n)."""
    _check_feasible(n, force)
    sec = period_section(table, n)
    segs = list(_segments(sec.lo, sec.hi, segment))

    def count(seg: Tuple[int, int]) -> int:
        return int(np.count_nonzero(omega_mask(table, n, seg[0], seg[1])))

    observed = sum(_map_segments(count, segs, threads))
    expected = phi(table, n)
    return CensusReport(
        n=n,
        p=nth_prime(table, n),
        expected=expected,
        observed=observed,
        match=expected == observed,
    )


def _strike_mask(p: int, lo: int, hi: int) -> np.ndarray:
    """Positions in [lo, hi] where sieve p strikes (psi == 0)."""
    k = kappa(p)
    mask = np.zeros(hi - lo + 1, dtype=bool)
    for r in (k, p - k):
        first = lo + (r - lo) % p
        if first <= hi:
            mask[first - lo :: p] = True
    return mask


def beating_bars(
    table: PrimeTable,
    n_new: int,
    *,
    force: bool = False,
    collect_events: bool = False,
    threads: int = 1,
    segment: int = DEFAULT_SEGMENT,
) -> Tuple[int, Optional[List[BarEvent]]]:
    """Count (and optionally list) the strikes of sieve n_new on survivors of
    sieves 3..n_new-1 over the period of depth n_new.

    The count equals 2·phi(p_{n_new-1}) exactly: of the p_new copies of the
    previous survivor pattern in the longer period, the new sieve's two
    residues each hit every pattern position exactly once.
    """
    if n_new < 4:
        raise InvalidArgumentError(f"beating bars need n_new >= 4, got {n_new}")
    _check_feasible(n_new, force)
    sec = period_section(table, n_new)
    p_new = nth_prime(table, n_new)
    segs = list(_segments(sec.lo, sec.hi, segment))

    def scan(seg: Tuple[int, int]) -> np.ndarray:
        a, b = seg
        hits = omega_mask(table, n_new - 1, a, b) & _strike_mask(p_new, a, b)
        return np.flatnonzero(hits) + a

    positions = _map_segments(scan, segs, threads)
    count = sum(len(pos) for pos in positions)
    events: Optional[List[BarEvent]] = None
    if collect_events:
        events = [
            BarEvent(x=int(x), n_new=n_new, kind=bar_kind(int(x), p_new))
            for pos in positions
            for x in pos
        ]
    return count, events


def gap_histogram(
    table: PrimeTable,
    n: int,
    *,
    force: bool = False,
    threads: int = 1,
    segment: int = DEFAULT_SEGMENT,
) -> GapHistogram:
    """Histogram of cyclic survivor gaps over one full period."""
    _check_feasible(n, force)
    fr = frame(table, n)
    sec = period_section(table, n)
    segs = list(_segments(sec.lo, sec.hi, segment))

    def scan(seg: Tuple[int, int]):
        a, b = seg
        pos = np.flatnonzero(omega_mask(table, n, a, b)) + a
        if len(pos) == 0:
            return None
        inner = np.diff(pos)
        lengths, counts = np.unique(inner, return_counts=True)
        hist = Counter(
            {int(length): int(c) for length, c in zip(lengths, counts)}
        )
        return int(pos[0]), int(pos[-1]), hist

    merged: Counter = Counter()
    first_pos: Optional[int] = None
    prev_last: Optional[int] = None
    for res in _map_segments(scan, segs, threads):
        if res is None:
            continue
        first, last, hist = res
        merged.update(hist)
        if prev_last is None:
            first_pos = first
        else:
            merged[first - prev_last] += 1  # gap spanning a segment boundary
        prev_last = last
    assert first_pos is not None and prev_last is not None
    merged[first_pos + fr.reduced_primorial - prev_last] += 1  # wrap-around
    total = sum(merged.values())
    weighted = sum(length * c for length, c in merged.items())
    return GapHistogram(
        n=n,
        gaps=dict(sorted(merged.items())),
        total_gaps=total,
        mean=Fraction(weighted, total),
    )


def _omega_positions(
    table: PrimeTable, n: int, lo: int, hi: int, segment: int = DEFAULT_SEGMENT
) -> np.ndarray:
    parts = [
        np.flatnonzero(omega_mask(table, n, a, b)) + a
        for a, b in _segments(lo, hi, segment)
    ]
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)


def merged_gap_stats(
    table: PrimeTable, n_new: int, *, force: bool = False
) -> MergedGapReport:
    """Locate the survivor gaps of depth n_new that contain at least one
    strike of the newest sieve, and compare their exact mean length with the
    accounting prediction D = 2·delta_bar(n_new - 1)."""
    if n_new < 4:
        raise InvalidArgumentError(f"merged-gap stats need n_new >= 4, got {n_new}")
    _check_feasible(n_new, force)
    fr = frame(table, n_new)
    sec = period_section(table, n_new)
    survivors = _omega_positions(table, n_new, sec.lo, sec.hi)
    bar_count, events = beating_bars(table, n_new, force=force, collect_events=True)
    assert events is not None
    m = len(survivors)
    bar_positions = np.array([e.x for e in events], dtype=np.int64)
    # map each strike to the cyclic gap (survivors[i-1], survivors[i]) it fell in
    idx = np.searchsorted(survivors, bar_positions)
    gap_index = (idx - 1) % m
    hit = np.unique(gap_index)
    lengths = np.empty(m, dtype=np.int64)
    lengths[: m - 1] = np.diff(survivors)
    lengths[m - 1] = int(survivors[0]) + fr.reduced_primorial - int(survivors[-1])
    total = int(lengths[hit].sum())
    count = len(hit)
    predicted = 2 * delta_bar(table, n_new - 1)
    mean = Fraction(total, count)
    return MergedGapReport(
        n_new=n_new,
        bar_count=bar_count,
        merged_gap_count=count,
        merged_total_length=total,
        mean=mean,
        predicted=predicted,
        deviation=mean - predicted,
    )


def symmetry_check(table: PrimeTable, n: int, *, force: bool = False) -> bool:
    """Survivor residues over [1, primorial] are closed under negation mod the
    primorial (the residue `primorial` stands for 0)."""
    _check_feasible(n, force)
    prim = frame(table, n).reduced_primorial
    residues = _omega_positions(table, n, 1, prim)
    mirrored = (prim - residues) % prim
    mirrored[mirrored == 0] = prim
    return bool(np.array_equal(np.sort(mirrored), residues))


def origin_incongruence(table: PrimeTable, m: int, n: int) -> bool:
    """No origin lands at a period start of an earlier sieve:
    O_n mod primorial(m) != O_m for m < n."""
    if not (3 <= m < n):
        raise InvalidArgumentError(f"need 3 <= m < n, got m={m}, n={n}")
    _require_index(table, n)
    o_m = origin(nth_prime(table, m))
    o_n = origin(nth_prime(table, n))
    prim_m = frame(table, m).reduced_primorial
    assert o_m < prim_m, f"origin {o_m} not reduced mod {prim_m}"
    return o_n % prim_m != o_m


def pd1_check(table: PrimeTable, n: int) -> bool:
    """Endpoint algebra of the period recursion: the tail of period n, the
    p_{n+1}-1 shifted copies of period n, and the shifted A-section together
    tile period n+1 exactly.  Big-integer endpoints only, no enumeration."""
    _require_index(table, n)
    p = nth_prime(table, n)
    p_next = nth_prime(table, n + 1)
    o_n = origin(p)
    o_next = origin(p_next)
    prim = frame(table, n).reduced_primorial
    prim_next = prim * p_next
    pieces = [(o_next, o_n + prim - 1)]
    pieces += [
        (o_n + k * prim, o_n + (k + 1) * prim - 1) for k in range(1, p_next)
    ]
    pieces.append((o_n + prim_next, o_next - 1 + prim_next))
    if any(lo > hi for lo, hi in pieces):
        return False
    if any(pieces[i + 1][0] != pieces[i][1] + 1 for i in range(len(pieces) - 1)):
        return False
    return pieces[0][0] == o_next and pieces[-1][1] == o_next + prim_next - 1


def overlap_census(table: PrimeTable, n: int) -> OverlapReport:
    """Find the A-section containing the last position of period section n.

    With t the largest index such that O_t <= period_end (< O_{t+1}), the
    period reaches over t - n A-sections beyond its own, up to the beginning
    of period section t.
    """
    fr = frame(table, n)
    period_end = fr.origin + fr.reduced_primorial - 1
    s = math.isqrt(6 * period_end + 1)
    if table.limit < s:
        raise InsufficientTableError(
            f"overlap census at n={n} needs primes up to {s}, "
            f"table stops at {table.limit}"
        )
    t = int(np.searchsorted(table.primes, s, side="right"))
    if t >= len(table.primes):
        raise InsufficientTableError(
            f"overlap census at n={n} needs a prime beyond {s} to bound O_(t+1)"
        )
    return OverlapReport(
        n=n,
        period_end=period_end,
        terminal_index=t,
        spanned_sections=t - n,
    )


def a_section_probe(table: PrimeTable, n_lo: int, n_hi: int) -> ProbeReport:
    """Count twin-prime generators in each A-section for n in [n_lo, n_hi].

    On A_n the active sieves are exactly 3..n, so these are also the
    survivor counts of depth n there.  Sections with count 0 are listed as
    findings.
    """
    if not (3 <= n_lo <= n_hi):
        raise InvalidArgumentError(f"need 3 <= n_lo <= n_hi, got {n_lo}, {n_hi}")
    _require_index(table, n_hi + 1)
    origins = [origin(nth_prime(table, n)) for n in range(n_lo, n_hi + 2)]
    span = Interval(origins[0], origins[-1] - 1)
    mask = twin_sieve_mask(table, span)
    counts: List[Tuple[int, int]] = []
    empty: List[int] = []
    for i, n in enumerate(range(n_lo, n_hi + 1)):
        c = int(np.count_nonzero(mask[origins[i] - span.lo : origins[i + 1] - span.lo]))
        counts.append((n, c))
        if c == 0:
            empty.append(n)
    return ProbeReport(n_lo=n_lo, n_hi=n_hi, counts=counts, empty_sections=empty)
