# int_polynomial.py
from dataclasses import dataclass
from math import gcd
from typing import Sequence, Tuple, Union

from sympy import Poly, isprime, symbols

from utils.errors import MalformedInputError, NotPrimeError

_T = symbols("t")


def _trim(coeffs: Sequence[int]) -> Tuple[int, ...]:
    trimmed = list(coeffs)
    while trimmed and trimmed[-1] == 0:
        trimmed.pop()
    return tuple(trimmed)


@dataclass(frozen=True, eq=False)
class IntPolynomial:
    """Polynomial in t over the integers; the zero polynomial has no coefficients."""

    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trim(int(c) for c in self.coeffs))

    @classmethod
    def t(cls) -> "IntPolynomial":
        return cls((0, 1))

    @classmethod
    def constant(cls, value: int) -> "IntPolynomial":
        return cls((value,))

    @staticmethod
    def _coerce(other):
        if isinstance(other, IntPolynomial):
            return other
        if isinstance(other, int):
            return IntPolynomial((other,))
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        size = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = other.coeffs + (0,) * (size - len(other.coeffs))
        return IntPolynomial(tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self):
        return IntPolynomial(tuple(-c for c in self.coeffs))

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
        if self.is_zero() or other.is_zero():
            return IntPolynomial()
        prod = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        return IntPolynomial(tuple(prod))

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("negative powers are not polynomials")
        result = IntPolynomial((1,))
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.coeffs == other.coeffs

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(self.coeffs)

    def evaluate(self, x):
        result = 0
        for c in reversed(self.coeffs):
            result = result * x + c
        return result

    def content(self) -> int:
        """gcd of the coefficients; 0 for the zero polynomial."""
        return gcd(*self.coeffs) if self.coeffs else 0

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c == 0:
                continue
            magnitude = abs(c)
            if power == 0:
                body = str(magnitude)
            else:
                monomial = "t" if power == 1 else f"t^{power}"
                body = monomial if magnitude == 1 else f"{magnitude}{monomial}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f"+{body}" if c > 0 else f"-{body}")
        return "".join(parts)

    def __repr__(self) -> str:
        return f"IntPolynomial({self})"


def intpoly_ops(a: IntPolynomial, b: IntPolynomial, op: str) -> IntPolynomial:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise MalformedInputError(f"unknown polynomial operation {op!r}")


def reduce_mod(a: IntPolynomial, p: int) -> IntPolynomial:
    """Coefficientwise reduction; the result holds representatives in [0, p)."""
    return IntPolynomial(tuple(c % p for c in a.coeffs))


def intpoly_reduce_mod(a: IntPolynomial, p: int) -> Poly:
    """The image of a in GF(p)[t], as a sympy polynomial with modulus p."""
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime", p=p)
    return Poly(list(reversed(reduce_mod(a, p).coeffs)) or [0], _T, modulus=p)


def parse_int_polynomial(text: str) -> IntPolynomial:
    """Parse text such as 't^4+3t^2+2t' or 't^3-t-1'."""
    cleaned = text.replace(" ", "").replace("*", "")
    if not cleaned:
        raise MalformedInputError("empty polynomial text")
    if cleaned[0] not in "+-":
        cleaned = "+" + cleaned
    terms = []
    start = 0
    for index in range(1, len(cleaned) + 1):
        if index == len(cleaned) or cleaned[index] in "+-":
            terms.append(cleaned[start:index])
            start = index
    result = IntPolynomial()
    for term in terms:
        sign = -1 if term[0] == "-" else 1
        body = term[1:]
        try:
            if "t" in body:
                coefficient_text, _, power_text = body.partition("t")
                coefficient = int(coefficient_text) if coefficient_text else 1
                power = int(power_text[1:]) if power_text.startswith("^") else 1
                if power_text and not power_text.startswith("^"):
                    raise ValueError(power_text)
            else:
                coefficient, power = int(body), 0
        except ValueError:
            raise MalformedInputError(f"cannot parse polynomial term {term!r} in {text!r}")
        result = result + IntPolynomial((0,) * power + (sign * coefficient,))
    return result
