# finite_field.py
"""
Finite fields GF(p^m) with an explicit irreducible modulus.

Elements are immutable coefficient tuples (little-endian in t) reduced modulo
the field's monic modulus. Descriptors are built deterministically: the modulus
is the lexicographically smallest monic irreducible polynomial of degree m,
comparing coefficients from the constant term upward.
"""
import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Iterator, Sequence, Tuple, Union

from sympy import Poly, factorint, isprime, symbols

from utils.errors import (
    FieldMismatchError,
    InvalidDegreeError,
    MalformedInputError,
    NoSuchRootError,
    NotCoprimeError,
    NotPrimeError,
)

logger = logging.getLogger(__name__)

_T = symbols("t")


@dataclass(frozen=True)
class FieldDescriptor:
    p: int
    m: int
    modulus: Tuple[int, ...]

    @property
    def order(self) -> int:
        return self.p ** self.m

    @property
    def is_prime_field(self) -> bool:
        return self.m == 1

    def element(self, value: Union[int, Sequence[int], "FieldElement"]) -> "FieldElement":
        """Embed an integer, a coefficient sequence or an element of this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"element of {value.field.label()} is not in {self.label()}")
            return value
        if isinstance(value, int):
            return FieldElement(self, (value % self.p,) + (0,) * (self.m - 1))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.m:
            raise MalformedInputError(f"{len(coeffs)} coefficients given for {self.label()}")
        return FieldElement(self, tuple(coeffs) + (0,) * (self.m - len(coeffs)))

    def zero(self) -> "FieldElement":
        return self.element(0)

    def one(self) -> "FieldElement":
        return self.element(1)

    def generator(self) -> "FieldElement":
        """The class of t; generates the field over GF(p) when m > 1."""
        if self.m == 1:
            return self.zero()
        return self.element((0, 1))

    def elements(self) -> Iterator["FieldElement"]:
        """All elements in lexicographic coefficient order, constant term most significant."""
        for coeffs in itertools.product(range(self.p), repeat=self.m):
            yield FieldElement(self, coeffs)

    def label(self) -> str:
        return f"GF({self.p})" if self.m == 1 else f"GF({self.p}^{self.m})"

    def __str__(self) -> str:
        return self.label()


def _reduce_product(field: FieldDescriptor, prod: list) -> Tuple[int, ...]:
    p, m, modulus = field.p, field.m, field.modulus
    for k in range(len(prod) - 1, m - 1, -1):
        c = prod[k] % p
        if c:
            base = k - m
            for j in range(m):
                if modulus[j]:
                    prod[base + j] -= c * modulus[j]
        prod[k] = 0
    return tuple(c % p for c in prod[:m])


def _mul_coeffs(field: FieldDescriptor, a: Tuple[int, ...], b: Tuple[int, ...]) -> Tuple[int, ...]:
    if field.m == 1:
        return ((a[0] * b[0]) % field.p,)
    prod = [0] * (2 * field.m - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    prod[i + j] += ai * bj
    return _reduce_product(field, prod)


@dataclass(frozen=True, eq=False)
class FieldElement:
    field: FieldDescriptor
    coeffs: Tuple[int, ...]

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"cannot combine {self.field.label()} with {other.field.label()}")
            return other
        if isinstance(other, int):
            return self.field.element(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        p = self.field.p
        return FieldElement(self.field, tuple((a + b) % p for a, b in zip(self.coeffs, other.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-a) % p for a in self.coeffs))

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return FieldElement(self.field, _mul_coeffs(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError(f"zero has no inverse in {self.field.label()}")
        return self ** (self.field.order - 2)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = self.field.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self.coeffs == self.field.element(other).coeffs
        return NotImplemented

    def __hash__(self):
        if all(c == 0 for c in self.coeffs[1:]):
            return hash(self.coeffs[0])
        return hash((self.field.p, self.coeffs))

    def __lt__(self, other: "FieldElement") -> bool:
        return self.coeffs < other.coeffs

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_one(self) -> bool:
        return self.coeffs[0] == 1 and not any(self.coeffs[1:])

    def frobenius(self, e: int = 1) -> "FieldElement":
        return self ** (self.field.p ** (e % self.field.m))

    def is_in_subfield(self, k: int) -> bool:
        """True when x lies in GF(p^k), i.e. x^(p^k) = x."""
        return self ** (self.field.p ** k) == self

    def multiplicative_order(self) -> int:
        if self.is_zero():
            raise ZeroDivisionError("zero has no multiplicative order")
        order = self.field.order - 1
        for prime, exponent in factorint(order).items():
            for _ in range(exponent):
                if (self ** (order // prime)).is_one():
                    order //= prime
                else:
                    break
        return order

    def __repr__(self) -> str:
        return f"FieldElement({self.field.label()}, {self})"

    def __str__(self) -> str:
        if self.field.m == 1:
            return str(self.coeffs[0])
        terms = []
        for power in range(self.field.m - 1, -1, -1):
            c = self.coeffs[power]
            if not c:
                continue
            if power == 0:
                terms.append(str(c))
            else:
                monomial = "t" if power == 1 else f"t^{power}"
                terms.append(monomial if c == 1 else f"{c}{monomial}")
        return "+".join(terms) if terms else "0"


def gf_is_irreducible(p: int, coeffs: Sequence[int]) -> bool:
    """Irreducibility over GF(p) of the polynomial with little-endian coefficients."""
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] % p == 0:
        trimmed.pop()
    if len(trimmed) < 2:
        return False
    return Poly(list(reversed(trimmed)), _T, modulus=p).is_irreducible


@lru_cache(maxsize=None)
def gf_construct(p: int, m: int) -> FieldDescriptor:
    """
    Build GF(p^m) with the lexicographically smallest monic irreducible modulus.

    Raises:
        NotPrimeError: If p is not prime
        InvalidDegreeError: If m < 1
    """
    if not isinstance(p, int) or not isprime(p):
        raise NotPrimeError(f"{p} is not prime", p=p)
    if not isinstance(m, int) or m < 1:
        raise InvalidDegreeError(f"extension degree must be at least 1, got {m}", m=m)
    if m == 1:
        return FieldDescriptor(p, 1, (0, 1))
    for lower in itertools.product(range(p), repeat=m):
        if lower[0] == 0:
            continue
        candidate = lower + (1,)
        if gf_is_irreducible(p, candidate):
            logger.debug("GF(%d^%d) modulus %s", p, m, candidate)
            return FieldDescriptor(p, m, candidate)
    raise InvalidDegreeError(f"no irreducible polynomial of degree {m} over GF({p})")


def frobenius(x: FieldElement, e: int) -> FieldElement:
    """x^(p^e); negative e is taken modulo the order m of F on GF(p^m)."""
    return x.frobenius(e)


def primitive_root_of_unity(field: FieldDescriptor, n: int) -> FieldElement:
    """
    The lexicographically smallest element of multiplicative order exactly n.

    Raises:
        NotCoprimeError: If p divides n
        NoSuchRootError: If n does not divide p^m - 1
    """
    if n < 1:
        raise NoSuchRootError(f"order must be positive, got {n}")
    if n % field.p == 0:
        raise NotCoprimeError(f"characteristic {field.p} divides {n}", p=field.p, n=n)
    if (field.order - 1) % n:
        raise NoSuchRootError(f"{n} does not divide {field.order - 1} in {field.label()}", n=n)
    if n == 1:
        return field.one()
    cofactor = (field.order - 1) // n
    prime_divisors = list(factorint(n))
    for candidate in field.elements():
        if candidate.is_zero():
            continue
        root = candidate ** cofactor
        if all(not (root ** (n // r)).is_one() for r in prime_divisors):
            break
    # every primitive n-th root is a coprime power of any one of them
    roots = [root ** i for i in range(1, n) if gcd(i, n) == 1]
    return min(roots, key=lambda element: element.coeffs)
