"""Generator-level twin-prime sieve with exact verification tooling.

Twin primes share a generator: 6k-1 and 6k+1.  This package sieves candidate
generators with the quadratic rule (x² - kappa(p)²) mod p, counts survivors
per period with exact arithmetic, and cross-checks everything against an
independent Eratosthenes oracle.
"""
from .errors import (
    FeasibilityError,
    InsufficientTableError,
    InvalidArgumentError,
    OutOfRangeError,
    TableCacheError,
    TwinSieveError,
)
from .primes import (
    PrimeClass,
    PrimeTable,
    build_prime_table,
    kappa,
    load_prime_table,
    nth_prime,
    p_hat,
    prime_class,
    prime_count,
    save_prime_table,
    table_for_count,
    twin_mask,
)
from .sieve import (
    BarKind,
    Interval,
    SieveFrame,
    a_section,
    aggregate_psi,
    aggregate_psi_hat,
    bar_kind,
    enumerate_omega,
    enumerate_twin_generators,
    frame,
    is_omega,
    origin,
    period_section,
    psi,
    reduced_primorial,
    tau,
    twin_by_primality,
    twin_by_sieve,
)
from .stats import (
    BarEvent,
    BoundsRow,
    CensusReport,
    FEASIBLE_N,
    GapHistogram,
    MergedGapReport,
    OverlapReport,
    ProbeReport,
    a_section_probe,
    beating_bars,
    bound_report,
    delta_bar,
    eta,
    gap_histogram,
    merged_gap_stats,
    origin_incongruence,
    overlap_census,
    pd1_check,
    period_census,
    phi,
    symmetry_check,
)

__version__ = "0.1.0"

__all__ = [
    "BarEvent",
    "BarKind",
    "BoundsRow",
    "CensusReport",
    "FEASIBLE_N",
    "FeasibilityError",
    "GapHistogram",
    "InsufficientTableError",
    "Interval",
    "InvalidArgumentError",
    "MergedGapReport",
    "OutOfRangeError",
    "OverlapReport",
    "PrimeClass",
    "PrimeTable",
    "ProbeReport",
    "SieveFrame",
    "TableCacheError",
    "TwinSieveError",
    "a_section",
    "a_section_probe",
    "aggregate_psi",
    "aggregate_psi_hat",
    "bar_kind",
    "beating_bars",
    "bound_report",
    "build_prime_table",
    "delta_bar",
    "enumerate_omega",
    "enumerate_twin_generators",
    "eta",
    "frame",
    "gap_histogram",
    "is_omega",
    "kappa",
    "load_prime_table",
    "merged_gap_stats",
    "nth_prime",
    "origin",
    "origin_incongruence",
    "overlap_census",
    "p_hat",
    "pd1_check",
    "period_census",
    "period_section",
    "phi",
    "prime_class",
    "prime_count",
    "psi",
    "reduced_primorial",
    "save_prime_table",
    "symmetry_check",
    "table_for_count",
    "tau",
    "twin_by_primality",
    "twin_by_sieve",
    "twin_mask",
]
