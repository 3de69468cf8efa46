# prime_service.py
import logging
import math
from typing import Iterable, List

import numpy as np
from sympy import isprime, nextprime

from utils.errors import MalformedInputError, NotPrimeError, SystemDomainError

logger = logging.getLogger(__name__)

# Integers covered by one segment of the segmented sieve
SEGMENT_SPAN = 1 << 22


def prime_set_product(primes: Iterable[int]) -> int:
    """
    Product of a nonempty set of distinct primes.

    Raises:
        SystemDomainError: If the set is empty or repeats a prime
        NotPrimeError: If a member is not prime
    """
    members = list(primes)
    if not members:
        raise SystemDomainError("the prime set is empty")
    if len(set(members)) != len(members):
        raise SystemDomainError(f"primes repeat in {members}")
    for p in members:
        if not isprime(p):
            raise NotPrimeError(f"{p} is not prime", p=p)
    return math.prod(members)


def sieve_primes(limit: int) -> np.ndarray:
    """All primes strictly below limit, ascending."""
    if limit <= 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit - 1) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def sieve_range(low: int, high: int) -> List[int]:
    """
    Primes in [low, high) by a segmented sieve over base primes up to sqrt(high).

    Returns Python ints so values above the int64 range stay exact.
    """
    if high <= low or high <= 2:
        return []
    low = max(low, 2)
    base = sieve_primes(math.isqrt(high - 1) + 1).tolist()
    found: List[int] = []
    start = low
    while start < high:
        stop = min(start + SEGMENT_SPAN, high)
        mask = np.ones(stop - start, dtype=bool)
        for p in base:
            if p * p >= stop:
                break
            first = max(p * p, ((start + p - 1) // p) * p)
            if first < stop:
                mask[first - start::p] = False
        found.extend(start + int(offset) for offset in np.flatnonzero(mask))
        start = stop
    return found


def consecutive_primes(start: int, count: int) -> List[int]:
    """
    The count consecutive primes beginning at start (or at the next prime after it).

    The window is produced with sympy.nextprime and then confirmed against a
    segmented sieve over the same range.

    Raises:
        MalformedInputError: If count < 1 or the sieve disagrees
    """
    if count < 1:
        raise MalformedInputError(f"count must be positive, got {count}")
    first = start if start >= 2 and isprime(start) else nextprime(start)
    window = [int(first)]
    while len(window) < count:
        window.append(int(nextprime(window[-1])))
    confirmed = sieve_range(window[0], window[-1] + 1)
    if confirmed != window:
        raise MalformedInputError(f"sieve disagrees with the prime window starting at {window[0]}")
    logger.debug("confirmed %d consecutive primes from %d to %d", count, window[0], window[-1])
    return window
