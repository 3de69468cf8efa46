# test_equation_solver_service.py
from fractions import Fraction

import pytest

from services.equation_solver_service import (
    EquationSolverService,
    bad_set_certificate,
    characteristic_evidence,
    evaluate_system,
    phi_closed_forms,
    primes_below,
    propagate_symbolic,
    rational_roots,
    search_solutions,
    verify_assignment,
)
from services.equation_system import Equation, EquationSystem, build_finite, build_finite_all, build_phi_n
from services.finite_field import gf_construct
from utils.config import Settings
from utils.errors import MissingVariableError, NotTriangularError, SearchTooLargeError


def test_phi_3_values():
    values = propagate_symbolic(build_phi_n(3))
    assert str(values["w"]) == "t^4+3t^2+2t"
    assert str(values["w3"]) == "t^4+2t^2+t"
    assert str(values["z2"]) == "t^2+t"
    assert str(values["x1"]) == "1"
    assert values["x0"].is_zero()


def test_phi_2_value_of_w():
    assert str(propagate_symbolic(build_phi_n(2))["w"]) == "t^3+2t+1"


@pytest.mark.parametrize("n", range(2, 16))
def test_closed_forms(n):
    values = propagate_symbolic(build_phi_n(n))
    for name, expected in phi_closed_forms(n).items():
        assert values[name] == expected


def test_constraints_are_not_propagated():
    values = propagate_symbolic(build_finite([3]))
    assert str(values["y4"]) == "t^4"


def test_extra_free_variables_are_rejected():
    with pytest.raises(NotTriangularError):
        propagate_symbolic(build_finite_all([3]))


def test_use_before_definition_is_rejected():
    S = EquationSystem(("x0", "x1", "y1", "a", "b"), (Equation("sum", "a", "b", "y1"), Equation("sum", "b", "y1", "x1")))
    with pytest.raises(NotTriangularError):
        evaluate_system(S, {"y1": 2}, 0, 1)


def test_phi_3_has_no_bad_primes_below_100():
    report = bad_set_certificate(build_phi_n(3), primes_below(100))
    assert report.verdict
    assert len(report.per_prime) == 25
    nonzero = [entry["degree"] for entry in report.differences if entry["polynomial"] != "0"]
    assert report.degree_bound == sum(nonzero)
    assert len(report.differences) == 12 * 11 // 2


def test_bad_set_flags_a_difference_divisible_by_p():
    S = EquationSystem(
        ("x0", "x1", "y1", "a", "b"),
        (Equation("sum", "a", "y1", "x1"), Equation("sum", "b", "a", "x1")),
    )
    report = bad_set_certificate(S, [2, 3])
    assert not report.verdict
    assert report.per_prime == {2: [("y1", "b")], 3: []}
    payload = report.to_dict(include_differences=False)
    assert payload["primes"]["2"] == {"ok": False, "vanishing": [["y1", "b"]]}
    assert "differences" not in payload


def test_verify_reports_equations_and_collisions(gf3):
    S = build_phi_n(2)
    values = evaluate_system(S, {"y1": gf3.element(2)}, gf3.zero(), gf3.one())
    report = verify_assignment(S, values)
    assert report.violated_equations == []
    assert report.collisions
    assert not report.accepted
    broken = dict(values, x0=gf3.one())
    assert {"index": None, "equation": "x0 = 0"} in verify_assignment(S, broken).violated_equations


def test_verify_needs_every_variable():
    with pytest.raises(MissingVariableError):
        verify_assignment(build_phi_n(2), {"x0": 0, "x1": 1})


def test_finite_three_is_solvable_in_characteristic_three():
    result = search_solutions(build_finite([3]), gf_construct(3, 6))
    assert result.free_variables == ["y1"]
    assert result.examined == 729
    assert result.solutions
    assert verify_assignment(build_finite([3]), result.solutions[0]).accepted


@pytest.mark.parametrize("m", [1, 2, 3])
def test_finite_three_has_no_solution_in_characteristic_five(m):
    assert search_solutions(build_finite([3]), gf_construct(5, m)).solutions == []


def test_search_is_independent_of_thread_count():
    S = build_phi_n(3)
    field = gf_construct(2, 4)
    assert search_solutions(S, field, threads=1).solutions == search_solutions(S, field, threads=3).solutions


def test_search_limit():
    with pytest.raises(SearchTooLargeError):
        search_solutions(build_finite_all([3]), gf_construct(2, 3), limit=100)


def test_solver_service_uses_the_configured_limit():
    S = build_finite_all([3])
    field = gf_construct(2, 3)
    with pytest.raises(SearchTooLargeError):
        EquationSolverService(Settings(search_limit=100)).search(S, field)
    result = EquationSolverService(Settings(threads=2)).search(build_finite([3]), gf_construct(3, 1))
    assert result.examined == 3
    assert result.solutions == []


def test_characteristic_evidence_over_small_fields():
    evidence = characteristic_evidence(build_finite([3]), [gf_construct(3, 1), gf_construct(5, 1)])
    assert [(item.examined, item.solution_count) for item in evidence] == [(3, 0), (5, 0)]
    assert evidence[0].first_solution is None


def test_rational_roots():
    assert rational_roots([-1, 1, 0, 1]) == []
    assert rational_roots([6, -5, 1]) == [Fraction(2), Fraction(3)]
    assert rational_roots([0, 0, 1]) == [Fraction(0)]
    assert rational_roots([-1, 2]) == [Fraction(1, 2)]
