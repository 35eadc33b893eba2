import numpy as np
import pytest

from twinsieve import (
    InsufficientTableError,
    InvalidArgumentError,
    OutOfRangeError,
    PrimeClass,
    TableCacheError,
    build_prime_table,
    kappa,
    load_prime_table,
    nth_prime,
    p_hat,
    prime_class,
    prime_count,
    save_prime_table,
    twin_mask,
)
from twinsieve.primes import table_for_count, table_with_prime_above


def is_prime_slow(n: int) -> bool:
    """Trial division; the independent check the sieve is measured against."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


class TestBuildPrimeTable:
    def test_first_primes(self):
        t = build_prime_table(10)
        assert list(t.primes) == [2, 3, 5, 7]

    def test_limit_30(self):
        t = build_prime_table(30)
        assert len(t.primes) == 10
        assert int(t.primes[-1]) == 29

    @pytest.mark.parametrize("limit", [0, 1, 2])
    def test_rejects_limit_below_3(self, limit):
        with pytest.raises(InvalidArgumentError):
            build_prime_table(limit)

    def test_matches_trial_division(self):
        t = build_prime_table(10_000)
        expected = [n for n in range(2, 10_001) if is_prime_slow(n)]
        assert list(t.primes) == expected

    def test_count_at_1e5_against_trial_division(self, table):
        slow = 1 + sum(1 for n in range(3, 100_001, 2) if is_prime_slow(n))
        assert len(table.primes) == slow == 9592

    def test_membership_flags(self, tiny_table):
        for n in range(0, 1001):
            assert tiny_table.is_prime(n) == is_prime_slow(n)

    def test_membership_out_of_range(self, tiny_table):
        with pytest.raises(InsufficientTableError):
            tiny_table.is_prime(1001)


class TestNthPrime:
    def test_examples(self, table):
        assert nth_prime(table, 1) == 2
        assert nth_prime(table, 3) == 5
        assert nth_prime(table, 9) == 23

    def test_out_of_range(self, tiny_table):
        with pytest.raises(OutOfRangeError):
            nth_prime(tiny_table, len(tiny_table.primes) + 1)

    def test_bad_index(self, tiny_table):
        with pytest.raises(InvalidArgumentError):
            nth_prime(tiny_table, 0)

    def test_roundtrip_with_count(self, tiny_table):
        for n in range(1, len(tiny_table.primes) + 1):
            assert prime_count(tiny_table, nth_prime(tiny_table, n)) == n


class TestPrimeCount:
    def test_examples(self, table):
        assert prime_count(table, 1) == 0
        assert prime_count(table, 23) == 9
        assert prime_count(table, 10_000) == 1229

    def test_beyond_table(self, tiny_table):
        with pytest.raises(InsufficientTableError):
            prime_count(tiny_table, 1001)


class TestPHat:
    def test_examples(self, table):
        assert p_hat(table, 3) is None
        assert p_hat(table, 4) == 5
        assert p_hat(table, 88) == 23

    def test_none_only_below_4(self, table):
        for x in range(1, 4):
            assert p_hat(table, x) is None
        for x in range(4, 200):
            assert p_hat(table, x) is not None

    def test_squeeze(self, table):
        # p_hat(x)^2 <= 6x+1 and the next prime's square exceeds 6x+1
        for x in range(4, 800):
            p = p_hat(table, x)
            assert p * p <= 6 * x + 1
            nxt = nth_prime(table, prime_count(table, p) + 1)
            assert nxt * nxt > 6 * x + 1

    def test_insufficient_table(self):
        t = build_prime_table(10)
        with pytest.raises(InsufficientTableError):
            p_hat(t, 100)


class TestKappaAndClass:
    def test_kappa_examples(self):
        assert kappa(5) == 1
        assert kappa(7) == 1
        assert kappa(23) == 4

    def test_class_examples(self):
        assert prime_class(5) is PrimeClass.MINUS
        assert prime_class(7) is PrimeClass.PLUS
        assert prime_class(19) is PrimeClass.PLUS

    @pytest.mark.parametrize("p", [2, 3, 4, 6, 12])
    def test_rejects_out_of_domain(self, p):
        with pytest.raises(InvalidArgumentError):
            kappa(p)
        with pytest.raises(InvalidArgumentError):
            prime_class(p)

    def test_kappa_reconstructs_prime(self, tiny_table):
        for p in (int(q) for q in tiny_table.primes[2:]):
            k = kappa(p)
            if prime_class(p) is PrimeClass.MINUS:
                assert 6 * k - 1 == p and 6 * k + 1 != p
            else:
                assert 6 * k + 1 == p and 6 * k - 1 != p

    def test_square_minus_one_divisible_by_six(self, tiny_table):
        for p in (int(q) for q in tiny_table.primes[2:]):
            assert (p * p - 1) % 6 == 0


class TestTwinMask:
    def test_against_trial_division(self, table):
        mask = twin_mask(table, 1, 200)
        for i, x in enumerate(range(1, 201)):
            assert mask[i] == (is_prime_slow(6 * x - 1) and is_prime_slow(6 * x + 1))

    def test_needs_room_for_pairs(self, tiny_table):
        with pytest.raises(InsufficientTableError):
            twin_mask(tiny_table, 1, 200)

    def test_bad_range(self, tiny_table):
        with pytest.raises(InvalidArgumentError):
            twin_mask(tiny_table, 5, 4)


class TestSizingHelpers:
    def test_table_for_count(self):
        for count in (1, 5, 6, 100, 1300):
            t = table_for_count(count)
            assert len(t.primes) >= count

    def test_table_with_prime_above(self):
        t = table_with_prime_above(14_936)
        assert int(t.primes[-1]) > 14_936


class TestDiskCache:
    def test_roundtrip(self, tmp_path, tiny_table):
        path = tmp_path / "primes.twpt"
        save_prime_table(tiny_table, path)
        loaded = load_prime_table(path)
        assert loaded.limit == tiny_table.limit
        assert np.array_equal(loaded.primes, tiny_table.primes)
        assert np.array_equal(loaded.flags, tiny_table.flags)
        assert loaded.is_prime(997) and not loaded.is_prime(999)

    def test_roundtrip_even_limit(self, tmp_path):
        t = build_prime_table(100)
        path = tmp_path / "primes.twpt"
        save_prime_table(t, path)
        assert np.array_equal(load_prime_table(path).primes, t.primes)

    def test_detects_corruption(self, tmp_path, tiny_table):
        path = tmp_path / "primes.twpt"
        save_prime_table(tiny_table, path)
        raw = bytearray(path.read_bytes())
        raw[-1] ^= 0xFF
        path.write_bytes(bytes(raw))
        with pytest.raises(TableCacheError):
            load_prime_table(path)

    def test_detects_truncation(self, tmp_path, tiny_table):
        path = tmp_path / "primes.twpt"
        save_prime_table(tiny_table, path)
        path.write_bytes(path.read_bytes()[:-3])
        with pytest.raises(TableCacheError):
            load_prime_table(path)

    def test_rejects_foreign_file(self, tmp_path):
        path = tmp_path / "junk.bin"
        path.write_bytes(b"not a table at all, nope")
        with pytest.raises(TableCacheError):
            load_prime_table(path)
