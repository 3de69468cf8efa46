# test_prime_service.py
import pytest

from services.prime_service import consecutive_primes, prime_set_product, sieve_primes, sieve_range
from utils.errors import MalformedInputError, NotPrimeError, SystemDomainError


def test_sieve_small():
    assert sieve_primes(10).tolist() == [2, 3, 5, 7]
    assert len(sieve_primes(30)) == 10
    assert sieve_primes(2).tolist() == []


def test_prime_counting_to_a_million():
    assert len(sieve_primes(1_000_000)) == 78498


def test_segmented_sieve_matches_the_plain_sieve():
    assert sieve_range(10, 30) == [11, 13, 17, 19, 23, 29]
    plain = [p for p in sieve_primes(1_000_100).tolist() if p >= 999_900]
    assert sieve_range(999_900, 1_000_100) == plain
    assert sieve_range(30, 10) == []


def test_consecutive_primes():
    assert consecutive_primes(10, 3) == [11, 13, 17]
    assert consecutive_primes(13, 2) == [13, 17]
    assert consecutive_primes(0, 4) == [2, 3, 5, 7]
    with pytest.raises(MalformedInputError):
        consecutive_primes(10, 0)


def test_prime_set_product():
    assert prime_set_product([3, 5]) == 15
    with pytest.raises(SystemDomainError):
        prime_set_product([])
    with pytest.raises(SystemDomainError):
        prime_set_product([3, 3])
    with pytest.raises(NotPrimeError):
        prime_set_product([4])
