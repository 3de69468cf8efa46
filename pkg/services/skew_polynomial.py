# skew_polynomial.py
"""
The skew polynomial ring K[F] over a finite field K = GF(p^m).

Multiplication follows the twist F·a = a^p·F, so
(a F^i)(b F^j) = a b^(p^i) F^(i+j). Read as p-polynomials, an element
sum a_i F^i acts on K by x -> sum a_i x^(p^i).
"""
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

from services.finite_field import FieldDescriptor, FieldElement
from utils.errors import FieldMismatchError


def _trim(coeffs: Sequence[FieldElement]) -> Tuple[FieldElement, ...]:
    trimmed = list(coeffs)
    while trimmed and trimmed[-1].is_zero():
        trimmed.pop()
    return tuple(trimmed)


@dataclass(frozen=True, eq=False)
class SkewPolynomial:
    field: FieldDescriptor
    coeffs: Tuple[FieldElement, ...] = ()

    def __post_init__(self):
        for c in self.coeffs:
            if c.field != self.field:
                raise FieldMismatchError(f"coefficient in {c.field.label()} for K[F] over {self.field.label()}")
        object.__setattr__(self, "coeffs", _trim(self.coeffs))

    @classmethod
    def constant(cls, field: FieldDescriptor, value: Union[int, FieldElement]) -> "SkewPolynomial":
        return cls(field, (field.element(value),))

    @classmethod
    def frobenius_generator(cls, field: FieldDescriptor) -> "SkewPolynomial":
        return cls(field, (field.zero(), field.one()))

    @classmethod
    def monomial(cls, coefficient: FieldElement, power: int) -> "SkewPolynomial":
        field = coefficient.field
        return cls(field, (field.zero(),) * power + (coefficient,))

    def _coerce(self, other):
        if isinstance(other, SkewPolynomial):
            if other.field != self.field:
                raise FieldMismatchError(f"K[F] over {self.field.label()} and {other.field.label()}")
            return other
        if isinstance(other, (int, FieldElement)):
            return SkewPolynomial.constant(self.field, other)
        return NotImplemented

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, power: int) -> FieldElement:
        return self.coeffs[power] if power < len(self.coeffs) else self.field.zero()

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        size = max(len(self.coeffs), len(other.coeffs))
        return SkewPolynomial(self.field, tuple(self.coefficient(i) + other.coefficient(i) for i in range(size)))

    def __radd__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + self

    def __neg__(self):
        return SkewPolynomial(self.field, tuple(-c for c in self.coeffs))

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
        return skew_multiply(self, other)

    def __rmul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return skew_multiply(other, self)

    def __pow__(self, exponent: int):
        if exponent < 0:
            raise ValueError("K[F] has no inverses of positive degree")
        result = SkewPolynomial.constant(self.field, 1)
        for _ in range(exponent):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, (SkewPolynomial, int, FieldElement)):
            other = self._coerce(other)
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) == 1:
            return hash(self.coeffs[0])
        return hash(tuple(c.coeffs for c in self.coeffs))

    def evaluate_on(self, x: FieldElement) -> FieldElement:
        """Apply the p-polynomial sum a_i x^(p^i) to a field element."""
        result = self.field.zero()
        for power, c in enumerate(self.coeffs):
            result = result + c * x.frobenius(power)
        return result

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for power in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[power]
            if c.is_zero():
                continue
            monomial = "" if power == 0 else ("F" if power == 1 else f"F^{power}")
            if not monomial:
                terms.append(str(c))
            elif c.is_one():
                terms.append(monomial)
            else:
                terms.append(f"({c}){monomial}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"SkewPolynomial({self.field.label()}, {self})"


def skew_multiply(a: SkewPolynomial, b: SkewPolynomial) -> SkewPolynomial:
    """
    Product in K[F] honoring operand order.

    Raises:
        FieldMismatchError: If a and b live over different fields
    """
    if a.field != b.field:
        raise FieldMismatchError(f"K[F] over {a.field.label()} and {b.field.label()}")
    field = a.field
    if a.is_zero() or b.is_zero():
        return SkewPolynomial(field, ())
    prod = [field.zero()] * (len(a.coeffs) + len(b.coeffs) - 1)
    for i, ai in enumerate(a.coeffs):
        if ai.is_zero():
            continue
        for j, bj in enumerate(b.coeffs):
            if not bj.is_zero():
                prod[i + j] = prod[i + j] + ai * bj.frobenius(i)
    return SkewPolynomial(field, tuple(prod))


def commutator(a: SkewPolynomial, b: SkewPolynomial) -> SkewPolynomial:
    return a * b - b * a
