# test_equation_system.py
import pytest

from services.equation_system import (
    Equation,
    EquationSystem,
    build_cofinite,
    build_cofinite_cofinite,
    build_family,
    build_finite,
    build_finite_all,
    build_phi_n,
    build_root_of_unity,
    root_of_unity_order,
    system_summary,
    validate_system,
)
from utils.errors import MalformedInputError, NotPrimeError, SystemDomainError


def test_phi_3_shape():
    S = build_phi_n(3)
    assert len(S.variables) == 12
    assert len(S.equations) == 9
    assert S.variables[:2] == ("x0", "x1")
    assert S.free_variables() == ["y1"]
    assert S.constraint_indices() == []


@pytest.mark.parametrize("n", range(2, 12))
def test_phi_n_conforms(n):
    S = build_phi_n(n)
    assert validate_system(S) == []
    # x0, x1, y1..y_(n+1), z1..z_(n-1), w1..w_(2n-3), w
    assert len(S.variables) == 2 + (n + 1) + (n - 1) + (2 * n - 3) + 1


def test_phi_n_needs_n_at_least_two():
    with pytest.raises(SystemDomainError):
        build_phi_n(1)


def test_finite_adds_one_constraint():
    S = build_finite([3])
    assert len(S.equations) == len(build_phi_n(3).equations) + 1
    assert [str(S.equations[index]) for index in S.constraint_indices()] == ["y4 = w + y1"]
    assert validate_system(S) == []


def test_cofinite_defines_v():
    S = build_cofinite([3])
    assert S.variables[-1] == "v"
    assert S.constraint_indices() == []
    assert str(S.equations[-1]) == "v = w + y1"


def test_cofinite_cofinite_closes_the_cubic():
    S = build_cofinite_cofinite([3])
    assert S.variables[-3:] == ("u1", "u2", "u3")
    assert str(S.equations[-1]) == "x1 = u3 + u1"
    assert "u1" in S.free_variables()
    assert validate_system(S) == []


def test_finite_all_free_variables():
    S = build_finite_all([3])
    assert S.free_variables() == ["y1", "u1", "u2"]
    assert [str(S.equations[index]) for index in S.constraint_indices()] == ["u8 = u7 + u1"]
    assert validate_system(S) == []


def test_prime_set_validation():
    with pytest.raises(SystemDomainError):
        build_finite([2])
    with pytest.raises(NotPrimeError):
        build_finite([4])
    with pytest.raises(SystemDomainError):
        build_finite([3, 3])


def test_root_of_unity_system():
    assert root_of_unity_order(3) == 9
    assert root_of_unity_order(2) == 8
    assert root_of_unity_order(7) == 7
    S = build_root_of_unity(3)
    assert len(S.variables) == 13
    assert S.free_variables() == ["y1", "z1"]
    assert str(S.equations[S.constraint_indices()[0]]) == "x1 = y8 * y1"
    findings = validate_system(S)
    assert [(finding.equation_index, finding.message) for finding in findings] == [
        (7, "product target is constant x1")
    ]
    with pytest.raises(SystemDomainError):
        build_root_of_unity(1)


def test_validation_reports_each_violation():
    S = EquationSystem(
        ("x0", "x1", "a", "b"),
        (
            Equation("sum", "a", "x0", "x1"),
            Equation("product", "b", "x1", "a"),
            Equation("sum", "a", "a", "b"),
            Equation("product", "b", "a", "q"),
        ),
    )
    findings = validate_system(S)
    assert [finding.equation_index for finding in findings] == [0, 1, 2, 3]
    assert findings[0].message == "sum operand is constant x0"
    assert findings[1].message == "product operand is constant x1"
    assert findings[2].message == "target equals the left operand"
    assert "unknown variables" in findings[3].message


def test_system_needs_constants_first():
    with pytest.raises(MalformedInputError):
        EquationSystem(("x1", "x0"), ())
    with pytest.raises(MalformedInputError):
        Equation("difference", "a", "b", "c")


def test_family_dispatch():
    assert build_family("phi_n", n=4).family == "phi_n"
    assert build_family("finite_all", primes=[5]).family == "finite_all"
    with pytest.raises(MalformedInputError):
        build_family("phi_n")
    with pytest.raises(MalformedInputError):
        build_family("finite")
    with pytest.raises(MalformedInputError):
        build_family("infinite", n=3)


def test_summary():
    summary = system_summary(build_finite([3]))
    assert summary["variables"] == 12
    assert summary["equations"] == 10
    assert summary["free"] == ["y1"]
