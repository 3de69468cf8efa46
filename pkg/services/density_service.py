# density_service.py
"""
Natural densities of prime sets {p : p != 1 mod q for every q in S}.

The exact density of such a set is the product of (q-2)/(q-1) over q in S.
Everything that decides a result is done in exact rationals; floats are only
produced for display.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from sympy import isprime, nextprime

from services.prime_service import sieve_primes
from utils.errors import InfeasibleDensityError, MalformedInputError, ModulusTwoError, NotPrimeError

logger = logging.getLogger(__name__)

DEFAULT_CONVERGENCE_CUTOFFS = (10_000, 100_000, 1_000_000)

Number = Union[int, float, str, Fraction]


def fraction_text(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _check_moduli(S: Iterable[int]) -> List[int]:
    moduli = sorted(S)
    if len(set(moduli)) != len(moduli):
        raise MalformedInputError(f"moduli repeat in {moduli}")
    for q in moduli:
        if not isprime(q):
            raise NotPrimeError(f"modulus {q} is not prime", q=q)
    return moduli


def density_factor(q: int) -> Fraction:
    return Fraction(q - 2, q - 1)


def theoretical_density(S: Iterable[int]) -> Fraction:
    """
    Product of (q-2)/(q-1) over the moduli, in lowest terms.

    Raises:
        ModulusTwoError: If 2 is a modulus (its factor is 0)
        NotPrimeError: If a modulus is not prime
    """
    moduli = _check_moduli(S)
    if 2 in moduli:
        raise ModulusTwoError("modulus 2 gives the factor 0/1: only p = 2 satisfies p != 1 mod 2", q=2)
    value = Fraction(1)
    for q in moduli:
        value *= density_factor(q)
    return value


@dataclass
class DensityReport:
    moduli: Tuple[int, ...]
    cutoff: int
    primes_below: int
    primes_in_set: int
    theoretical: Union[Fraction, None]

    @property
    def empirical(self) -> float:
        return self.primes_in_set / self.primes_below if self.primes_below else 1.0

    def to_dict(self) -> Dict[str, Any]:
        payload = {
            "moduli": list(self.moduli),
            "cutoff": self.cutoff,
            "primes_below": self.primes_below,
            "primes_in_set": self.primes_in_set,
            "empirical": self.empirical,
            "theoretical": fraction_text(self.theoretical) if self.theoretical is not None else None,
        }
        if self.theoretical is not None:
            payload["theoretical_decimal"] = float(self.theoretical)
            payload["difference"] = abs(self.empirical - float(self.theoretical))
        return payload


def _membership_mask(primes: np.ndarray, moduli: Sequence[int]) -> np.ndarray:
    mask = np.ones(primes.shape, dtype=bool)
    for q in moduli:
        # literal test: q itself stays in the set since q mod q = 0
        mask &= primes % q != 1
    return mask


def empirical_density(S: Iterable[int], N: int) -> DensityReport:
    """
    Count the primes below N that avoid the residue 1 modulo every q in S.

    Raises:
        MalformedInputError: If N < 2
    """
    if N < 2:
        raise MalformedInputError(f"cutoff must be at least 2, got {N}")
    moduli = _check_moduli(S)
    primes = sieve_primes(N)
    in_set = int(_membership_mask(primes, moduli).sum())
    theoretical = None if 2 in moduli else theoretical_density(moduli)
    logger.info("density of %s below %d: %d of %d primes", moduli, N, in_set, len(primes))
    return DensityReport(tuple(moduli), N, int(len(primes)), in_set, theoretical)


def density_convergence(
    S: Iterable[int], cutoffs: Sequence[int] = DEFAULT_CONVERGENCE_CUTOFFS
) -> Tuple[pd.DataFrame, bool]:
    """
    Empirical against theoretical density at several cutoffs.

    Returns:
        Tuple[pd.DataFrame, bool]: One row per cutoff, and whether |empirical - theoretical|
        shrinks monotonically. Convergence need not be monotone, so the flag is reported only.
    """
    moduli = _check_moduli(S)
    theoretical = theoretical_density(moduli)
    ordered = sorted(cutoffs)
    if not ordered or ordered[0] < 2:
        raise MalformedInputError(f"cutoffs must be at least 2, got {list(cutoffs)}")
    primes = sieve_primes(ordered[-1])
    mask = _membership_mask(primes, moduli)
    records = []
    for cutoff in ordered:
        below = primes < cutoff
        total = int(below.sum())
        in_set = int((mask & below).sum())
        empirical = in_set / total if total else 1.0
        records.append({
            "cutoff": cutoff,
            "primes_below": total,
            "primes_in_set": in_set,
            "empirical": empirical,
            "theoretical": float(theoretical),
            "difference": abs(empirical - float(theoretical)),
        })
    frame = pd.DataFrame.from_records(records)
    monotone = bool(frame["difference"].is_monotonic_decreasing)
    return frame, monotone


def parse_exact(value: Number, name: str) -> Fraction:
    """Exact rational from an int, Fraction or decimal text; floats go through their repr."""
    try:
        return Fraction(str(value)) if isinstance(value, (float, str)) else Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise MalformedInputError(f"{name} must be a number, got {value!r}")


@dataclass
class GreedyResult:
    alpha: Fraction
    epsilon: Fraction
    primes: List[int]
    product: Fraction

    @property
    def error(self) -> Fraction:
        return abs(self.product - self.alpha)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "alpha": fraction_text(self.alpha),
            "epsilon": fraction_text(self.epsilon),
            "primes": self.primes,
            "product": fraction_text(self.product),
            "product_decimal": float(self.product),
            "error": fraction_text(self.error),
            "error_decimal": float(self.error),
            "within_epsilon": self.error < self.epsilon,
        }


def greedy_density_set(alpha: Number, epsilon: Number) -> GreedyResult:
    """
    A finite set A of odd primes with |prod_{q in A} (q-2)/(q-1) - alpha| < epsilon.

    With x_q = -ln((q-2)/(q-1)), the start is the first odd prime whose x_q is
    below twice ln((alpha+epsilon)/alpha), and primes are then taken in order
    until the running sum passes -ln(alpha+epsilon). Both tests are carried out
    on the exact products instead of the logarithms.

    Raises:
        InfeasibleDensityError: If alpha is outside (0, 1], epsilon <= 0 or alpha - epsilon <= 0
    """
    a = parse_exact(alpha, "alpha")
    eps = parse_exact(epsilon, "epsilon")
    if eps <= 0:
        raise InfeasibleDensityError(f"epsilon must be positive, got {epsilon}")
    if not 0 < a <= 1:
        raise InfeasibleDensityError(f"alpha must lie in (0, 1], got {alpha}")
    if a - eps <= 0:
        raise InfeasibleDensityError(f"alpha - epsilon = {float(a - eps)} is not positive")

    upper = a + eps
    if upper > 1:
        return GreedyResult(a, eps, [], Fraction(1))

    threshold = (a / upper) ** 2
    q = 3
    while density_factor(q) <= threshold:
        q = int(nextprime(q))
    chosen: List[int] = []
    product = Fraction(1)
    while product >= upper:
        chosen.append(q)
        product *= density_factor(q)
        q = int(nextprime(q))
    logger.info("greedy density set for alpha=%s eps=%s starts at %d with %d primes", a, eps, chosen[0], len(chosen))
    return GreedyResult(a, eps, chosen, product)


@dataclass
class XTerm:
    q: int
    factor: Fraction
    lower: Fraction
    upper: Fraction


def x_sequence(count: int) -> List[XTerm]:
    """
    Rational brackets 1/(q-1) <= x_q <= 1/(q-2) for the first count odd primes.

    Both follow from x_q = -ln(1 - 1/(q-1)) and 1/(q-1) <= -ln(1 - 1/(q-1)) <= 1/(q-2).
    """
    if count < 1:
        raise MalformedInputError(f"count must be positive, got {count}")
    terms = []
    q = 3
    for _ in range(count):
        terms.append(XTerm(q, density_factor(q), Fraction(1, q - 1), Fraction(1, q - 2)))
        q = int(nextprime(q))
    return terms


def x_bounds_hold(terms: Sequence[XTerm]) -> bool:
    """x_q >= 1/q for each term and the sequence strictly decreases, both certified by the brackets."""
    above_reciprocal = all(term.lower > Fraction(1, term.q) for term in terms)
    decreasing = all(later.upper < earlier.lower for earlier, later in zip(terms, terms[1:]))
    return above_reciprocal and decreasing
