import pytest

from twinsieve import build_prime_table


@pytest.fixture(scope="session")
def table():
    """Shared table: covers psi/twin checks up to x ~ 1.6e9/6 by sieve route
    and oracle lookups up to 1e5."""
    return build_prime_table(100_000)


@pytest.fixture(scope="session")
def tiny_table():
    return build_prime_table(1_000)
