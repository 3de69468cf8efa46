# test_skew_polynomial.py
import pytest
from hypothesis import given, settings, strategies as st

from services.finite_field import gf_construct
from services.skew_polynomial import SkewPolynomial, commutator, skew_multiply
from utils.errors import FieldMismatchError

GF9 = gf_construct(3, 2)


def elements_of(field):
    return st.lists(st.integers(0, field.p - 1), min_size=field.m, max_size=field.m).map(field.element)


def skew_over(field, max_degree=3):
    return st.lists(elements_of(field), max_size=max_degree + 1).map(lambda coeffs: SkewPolynomial(field, tuple(coeffs)))


def test_frobenius_twists_scalars():
    field = gf_construct(2, 2)
    t = field.generator()
    F = SkewPolynomial.frobenius_generator(field)
    assert F * t == SkewPolynomial.monomial(t * t, 1)
    assert t * F == SkewPolynomial.monomial(t, 1)
    assert F * t != t * F


def test_commutator_vanishes_on_prime_field_scalars():
    field = gf_construct(2, 2)
    F = SkewPolynomial.frobenius_generator(field)
    assert commutator(F, SkewPolynomial.constant(field, 1)).is_zero()
    assert not commutator(F, SkewPolynomial.constant(field, field.generator())).is_zero()


def test_powers_of_frobenius(gf9):
    F = SkewPolynomial.frobenius_generator(gf9)
    assert F ** 3 == SkewPolynomial.monomial(gf9.one(), 3)
    assert (F ** 0) == 1
    assert (F ** 2).degree == 2


def test_trailing_zero_coefficients_are_trimmed(gf9):
    polynomial = SkewPolynomial(gf9, (gf9.one(), gf9.zero(), gf9.zero()))
    assert polynomial.degree == 0
    assert SkewPolynomial(gf9, ()).is_zero()


def test_fields_must_agree():
    F8 = SkewPolynomial.frobenius_generator(gf_construct(2, 3))
    F9 = SkewPolynomial.frobenius_generator(gf_construct(3, 2))
    with pytest.raises(FieldMismatchError):
        skew_multiply(F8, F9)
    with pytest.raises(FieldMismatchError):
        F8 + F9


def test_string_form(gf9):
    F = SkewPolynomial.frobenius_generator(gf9)
    assert str(F) == "F"
    assert str(F * F + 1) == "F^2 + 1"
    assert str(SkewPolynomial(gf9, ())) == "0"


@settings(max_examples=40, deadline=None)
@given(skew_over(GF9), skew_over(GF9), skew_over(GF9))
def test_multiplication_is_associative_and_distributive(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert (a + b) * c == a * c + b * c


@settings(max_examples=40, deadline=None)
@given(skew_over(GF9), skew_over(GF9), elements_of(GF9))
def test_product_acts_as_composition(a, b, x):
    assert (a * b).evaluate_on(x) == a.evaluate_on(b.evaluate_on(x))
