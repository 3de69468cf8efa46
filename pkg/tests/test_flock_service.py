# test_flock_service.py
import itertools

import pytest
from hypothesis import given, settings, strategies as st

from services.finite_field import gf_construct
from services.flock_service import (
    ExplicitWindowFlock,
    FlockService,
    Window,
    check_axioms,
    check_stretch_support,
    default_window,
    dual_flock,
    explicit_window_from,
    lf1_prime_subsets,
    stretch_flock,
    support_matroid,
    valuation_flock,
    window_points,
)
from services.linear_algebra import RationalMatrix, Subspace, base_change
from services.matroid import uniform_matroid
from utils.config import FLOCK_CACHE_SIZE, Settings
from utils.errors import (
    DependentRowsError,
    DimensionMismatchError,
    EnumerationTooLargeError,
    FieldMismatchError,
    IncompatibleAutomorphismError,
    MalformedInputError,
    OutOfWindowError,
)

GF2 = gf_construct(2, 1)
GF3 = gf_construct(3, 1)
LINE = RationalMatrix.from_rows([[1, 1]])
PLANE = RationalMatrix.from_rows([[1, 0, 1], [0, 1, 1]])
FOUR = RationalMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]])


def test_valuation_flock_values(u24_matrix):
    f = valuation_flock(LINE, 2)
    assert f.at((0, 0)) == Subspace.from_rows(["1", "2"], GF2, [[1, 1]])
    assert f.at((1, 0)) == Subspace.from_rows(["1", "2"], GF2, [[1, 0]])
    assert f.at((0, 3)) == Subspace.from_rows(["1", "2"], GF2, [[0, 1]])
    expected = Subspace.from_rows(["1", "2", "3", "4"], GF2, [[0, 0, 0, 1], [0, 1, 1, 1]])
    assert valuation_flock(u24_matrix, 2).at((0, 0, 0, 1)) == expected


def test_flock_values_are_kept_in_a_bounded_cache():
    f = valuation_flock(LINE, 2)
    first = f.at((0, 0))
    assert f.at([0, 0]) is first
    info = f.cache_info()
    assert info.maxsize == FLOCK_CACHE_SIZE
    assert (info.hits, info.misses, info.currsize) == (1, 1, 1)


def test_valuation_flock_input_errors():
    with pytest.raises(DependentRowsError):
        valuation_flock(RationalMatrix.from_rows([[1, 1], [2, 2]]), 3)
    with pytest.raises(DimensionMismatchError):
        valuation_flock(LINE, 3).at((0, 0, 0))


def test_valuation_flock_satisfies_the_axioms(u24_matrix):
    f = valuation_flock(u24_matrix, 2)
    report = check_axioms(f, Window.box(f.ground, 1))
    assert report.points_checked == 81
    assert len(report.subsets) == 11
    assert report.passed


@pytest.mark.slow
@pytest.mark.parametrize("matrix", [LINE, FOUR], ids=["line", "u24"])
@pytest.mark.parametrize("p", [2, 3, 5])
def test_valuation_flocks_pass_on_the_radius_two_window(matrix, p):
    f = valuation_flock(matrix, p)
    report = check_axioms(f, Window.box(f.ground, 2))
    assert report.points_checked == 5 ** len(f.ground)
    assert report.violations == []


def test_dual_flock_values_and_axioms():
    f = valuation_flock(LINE, 3)
    dual = dual_flock(f)
    assert dual.exponent == 0
    assert dual.at((0, 0)) == Subspace.from_rows(["1", "2"], GF3, [[1, 2]])
    plane_dual = dual_flock(valuation_flock(PLANE, 3))
    assert plane_dual.at((0, 0, 0)) == Subspace.from_rows(["1", "2", "3"], GF3, [[1, 1, 2]])
    assert check_axioms(plane_dual, Window.box(plane_dual.ground, 1)).passed


def test_stretched_flock_over_gf9(gf9):
    inner = valuation_flock(LINE, 3)
    stretched = stretch_flock(inner, 2)
    assert stretched.field == gf9
    assert stretched.exponent == -1
    assert stretched.at((1, 0)) == Subspace.from_rows(["1", "2"], gf9, [[1, 0]])
    assert check_axioms(stretched, Window.box(stretched.ground, 2)).passed


@pytest.mark.parametrize("matrix, m", [(LINE, 2), (LINE, 3), (PLANE, 2)])
def test_stretching_restores_the_inner_flock(matrix, m):
    inner = valuation_flock(matrix, 3)
    stretched = stretch_flock(inner, m)
    for alpha in itertools.product((-1, 0, 1), repeat=len(inner.ground)):
        scaled = tuple(m * a for a in alpha)
        assert stretched.at(scaled) == base_change(inner.at(alpha), stretched.field)
    assert check_stretch_support(inner, stretched, Window.box(inner.ground, m)) == []


@pytest.mark.parametrize("matrix, m", [(LINE, 2), (LINE, 3), (PLANE, 2), (PLANE, 3)])
def test_stretching_in_characteristic_two(matrix, m):
    inner = valuation_flock(matrix, 2)
    stretched = stretch_flock(inner, m)
    assert stretched.field == gf_construct(2, m)
    for alpha in itertools.product((-1, 0, 1), repeat=len(inner.ground)):
        assert stretched.at(tuple(m * a for a in alpha)) == base_change(inner.at(alpha), stretched.field)
    window = Window.box(inner.ground, m)
    assert check_axioms(stretched, window).passed
    assert check_stretch_support(inner, stretched, window) == []


def test_stretch_factor_one_is_the_identity():
    f = valuation_flock(LINE, 3)
    assert stretch_flock(f, 1) is f
    with pytest.raises(MalformedInputError):
        stretch_flock(f, 0)


def test_stretch_field_must_extend():
    f = valuation_flock(LINE, 3)
    with pytest.raises(FieldMismatchError):
        stretch_flock(f, 2, field=gf_construct(2, 2))


@settings(max_examples=20, deadline=None)
@given(st.integers(-5, 5))
def test_stretching_twice_needs_a_compatible_automorphism(exponent):
    stretched = stretch_flock(valuation_flock(LINE, 2), 2)
    with pytest.raises(IncompatibleAutomorphismError):
        stretch_flock(stretched, 2, field=stretched.field, exponent=exponent)


def test_support_of_u24_valuation_flock(u24_matrix):
    f = valuation_flock(u24_matrix, 2)
    report = support_matroid(f, Window.box(f.ground, 1))
    assert report.matroid.bases == uniform_matroid(2, 4).bases
    assert report.is_matroid
    assert "finite window" in report.caveat


def test_stretched_support_matches_the_inner_support():
    inner = valuation_flock(LINE, 3)
    stretched = stretch_flock(inner, 2)
    outer = support_matroid(stretched, Window.box(inner.ground, 2)).matroid
    assert outer.bases == support_matroid(inner, Window.box(inner.ground, 1)).matroid.bases
    assert outer.bases == uniform_matroid(1, 2).bases


def test_flock_service_windows_and_checks():
    service = FlockService(Settings(window_budget=100))
    f = valuation_flock(FOUR, 2)
    window = service.window_for(f)
    assert window == Window.box(f.ground, 1)
    assert service.check(f, window).passed
    assert service.support(f, window).matroid.bases == uniform_matroid(2, 4).bases
    stretched = stretch_flock(valuation_flock(LINE, 3), 2)
    assert FlockService(Settings()).window_for(stretched) == Window.box(stretched.ground, 2)


def test_corrupted_window_breaks_only_lf2():
    f = valuation_flock(LINE, 3)
    frozen = explicit_window_from(f, Window.box(f.ground, 1))
    values = dict(frozen.values)
    values[(1, 1)] = Subspace.from_rows(["1", "2"], GF3, [[1, 2]])
    corrupted = ExplicitWindowFlock(frozen.window, values, frozen.field, frozen.exponent)
    report = check_axioms(corrupted, Window.from_bounds(f.ground, (-1, -1), (0, 0)))
    assert report.counts() == {"LF2": 1}
    assert report.violations[0]["alpha"] == [0, 0]
    assert check_axioms(frozen, Window.from_bounds(f.ground, (-1, -1), (0, 0))).passed


def test_explicit_flock_outside_its_box():
    f = valuation_flock(LINE, 3)
    frozen = explicit_window_from(f, Window.box(f.ground, 1))
    with pytest.raises(OutOfWindowError):
        frozen.at((5, 5))
    with pytest.raises(OutOfWindowError):
        check_axioms(frozen, Window.box(f.ground, 1))


def test_window_checks():
    w = Window.box(["a", "b"], 1)
    assert w.size == 9
    assert len(list(window_points(w))) == 9
    assert w.contains((1, -1))
    assert not w.contains((2, 0))
    assert w.scaled(2) == Window.box(["a", "b"], 2)
    with pytest.raises(MalformedInputError):
        Window.from_bounds(["a"], [1], [0])
    with pytest.raises(DimensionMismatchError):
        Window.from_bounds(["a", "b"], [0], [0])


def test_axiom_budget():
    f = valuation_flock(PLANE, 3)
    with pytest.raises(EnumerationTooLargeError):
        check_axioms(f, Window.box(f.ground, 1), budget=10)


def test_default_window_respects_the_budget():
    assert default_window(["1", "2", "3", "4"], radius=2, budget=100) == Window.box(["1", "2", "3", "4"], 1)
    assert default_window([str(i) for i in range(10)], budget=100).size == 1


def test_lf1_prime_subsets():
    assert lf1_prime_subsets(("a", "b", "c")) == [("a", "b"), ("a", "c"), ("b", "c"), ("a", "b", "c")]
    ground = tuple(str(i) for i in range(10))
    sample = lf1_prime_subsets(ground, sample_size=5, seed=7)
    assert len(sample) == 5
    assert len(set(sample)) == 5
    assert all(len(subset) >= 2 for subset in sample)
    assert sample == lf1_prime_subsets(ground, sample_size=5, seed=7)
