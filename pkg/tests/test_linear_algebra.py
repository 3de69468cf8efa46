# test_linear_algebra.py
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings, strategies as st

from services.finite_field import gf_construct
from services.linear_algebra import (
    RATIONALS,
    RationalMatrix,
    Subspace,
    apply_automorphism,
    base_change,
    determinant,
    direct_sum_along_partition,
    make_scalar,
    orthogonal_complement,
    p_adic_valuation,
    p_reduce,
    relabel,
    restrict,
    subspace_contract,
    subspace_delete,
)
from utils.errors import (
    DependentRowsError,
    DimensionMismatchError,
    FieldMismatchError,
    GroundSetError,
    MalformedInputError,
)

GF3 = gf_construct(3, 1)
GROUND = ("1", "2", "3", "4")

gf3_rows = st.lists(st.lists(st.integers(0, 2), min_size=4, max_size=4), max_size=3)
label_subsets = st.sets(st.sampled_from(GROUND))


def test_subspaces_compare_by_span():
    first = Subspace.from_rows(["a", "b"], RATIONALS, [[2, 4]])
    second = Subspace.from_rows(["a", "b"], RATIONALS, [["1/2", 1]])
    assert first == second
    assert first.rows == ((1, 2),)


def test_row_length_must_match_ground():
    with pytest.raises(DimensionMismatchError):
        Subspace.from_rows(["a", "b"], RATIONALS, [[1, 2, 3]])
    with pytest.raises(GroundSetError):
        Subspace.from_rows(["a", "a"], RATIONALS, [[1, 2]])


def test_rational_text_in_prime_field():
    assert make_scalar(GF3, "1/2") == 2
    with pytest.raises(MalformedInputError):
        make_scalar(gf_construct(2, 1), "1/2")


def test_delete_and_contract(gf3):
    V = Subspace.from_rows(["1", "2", "3"], gf3, [[1, 0, 1], [0, 1, 1]])
    assert subspace_delete(V, ["3"]) == Subspace.full(["1", "2"], gf3)
    assert subspace_contract(V, ["3"]) == Subspace.from_rows(["1", "2"], gf3, [[1, 2]])
    with pytest.raises(GroundSetError):
        subspace_delete(V, ["9"])


def test_orthogonal_complement_of_a_line(gf3):
    V = Subspace.from_rows(["1", "2"], gf3, [[1, 1]])
    assert orthogonal_complement(V) == Subspace.from_rows(["1", "2"], gf3, [[1, 2]])


def test_direct_sum_places_blocks(gf3):
    left = Subspace.from_rows(["2"], gf3, [[1]])
    right = Subspace.from_rows(["1", "3"], gf3, [[1, 1]])
    total = direct_sum_along_partition([left, right], ground=["1", "2", "3"])
    assert total == Subspace.from_rows(["1", "2", "3"], gf3, [[0, 1, 0], [1, 0, 1]])
    with pytest.raises(GroundSetError):
        direct_sum_along_partition([left, left])


def test_automorphism_and_base_change(gf9):
    t = gf9.generator()
    V = Subspace.from_rows(["1", "2"], gf9, [[1, t]])
    assert apply_automorphism(V, 1) == Subspace.from_rows(["1", "2"], gf9, [[1, t ** 3]])
    assert apply_automorphism(V, 2) == V
    line = Subspace.from_rows(["1", "2"], GF3, [[1, 2]])
    assert base_change(line, gf9) == Subspace.from_rows(["1", "2"], gf9, [[1, 2]])
    with pytest.raises(FieldMismatchError):
        base_change(V, gf_construct(3, 4))


def test_relabel_keeps_rows(gf3):
    V = Subspace.from_rows(["1", "2"], gf3, [[1, 1]])
    assert relabel(V, ["a", "b"]).ground == ("a", "b")
    with pytest.raises(DimensionMismatchError):
        relabel(V, ["a"])


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    assert determinant([[Fraction(1, 2), 0], [0, Fraction(2)]]) == 1
    assert determinant([]) == 1
    with pytest.raises(DimensionMismatchError):
        determinant([[1, 2]])


def test_p_adic_valuation():
    assert p_adic_valuation(Fraction(12, 5), 2) == 2
    assert p_adic_valuation(Fraction(3, 8), 2) == -3
    assert p_adic_valuation(Fraction(0), 2) is None


def test_p_reduce_of_a_line():
    line = RationalMatrix.from_rows([[1, 1]])
    gf2 = gf_construct(2, 1)
    assert p_reduce(line, 2, (0, 0)) == Subspace.from_rows(["1", "2"], gf2, [[1, 1]])
    assert p_reduce(line, 2, (1, 0)) == Subspace.from_rows(["1", "2"], gf2, [[1, 0]])
    assert p_reduce(line, 2, (0, 3)) == Subspace.from_rows(["1", "2"], gf2, [[0, 1]])


def test_p_reduce_lifts_a_dependent_reduction(u24_matrix):
    gf2 = gf_construct(2, 1)
    expected = Subspace.from_rows(GROUND, gf2, [[0, 0, 0, 1], [0, 1, 1, 1]])
    assert p_reduce(u24_matrix, 2, (0, 0, 0, 1)) == expected


def test_p_reduce_errors(u24_matrix):
    with pytest.raises(DimensionMismatchError):
        p_reduce(u24_matrix, 2, (0, 0))
    with pytest.raises(DependentRowsError):
        p_reduce(RationalMatrix.from_rows([[1, 1], [2, 2]]), 3, (0, 0))


@settings(max_examples=60, deadline=None)
@given(gf3_rows, label_subsets)
def test_rank_nullity_for_delete_and_contract(rows, removed):
    V = Subspace.from_rows(GROUND, GF3, rows)
    rest = [label for label in GROUND if label not in removed]
    assert subspace_delete(V, removed).dim + subspace_contract(V, rest).dim == V.dim


@settings(max_examples=60, deadline=None)
@given(gf3_rows)
def test_complement_dimension_and_involution(rows):
    V = Subspace.from_rows(GROUND, GF3, rows)
    complement = orthogonal_complement(V)
    assert complement.dim == len(GROUND) - V.dim
    assert orthogonal_complement(complement) == V


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.lists(st.integers(-6, 6), min_size=4, max_size=4), min_size=1, max_size=3),
    st.sampled_from([2, 3, 5]),
    st.lists(st.integers(-2, 2), min_size=4, max_size=4),
)
def test_p_reduce_keeps_the_rational_rank(rows, p, alpha):
    matrix = RationalMatrix.from_rows(rows)
    assume(matrix.rank == len(rows))
    assert p_reduce(matrix, p, alpha).dim == len(rows)


def test_restrict_keeps_ground_order(gf3):
    V = Subspace.from_rows(["1", "2", "3"], gf3, [[1, 0, 1], [0, 1, 1]])
    assert restrict(V, ["3", "1"]) == Subspace.full(["1", "3"], gf3)
    assert restrict(V, ["1", "2"]) == subspace_delete(V, ["3"])
    with pytest.raises(GroundSetError):
        restrict(V, ["9"])
