# test_skew_witness_service.py
import pytest

from services.finite_field import gf_construct
from services.skew_polynomial import SkewPolynomial
from services.skew_witness_service import default_alpha_degree, witness_finite_all, witness_root_of_unity
from utils.errors import (
    ForbiddenSubfieldError,
    NotCoprimeError,
    NotPrimeError,
    RootOfUnityObstruction,
    SystemDomainError,
)


def test_default_degree_avoids_forbidden_subfields():
    assert default_alpha_degree(3) == 3
    assert default_alpha_degree(5) == 5
    assert default_alpha_degree(15) == 3


def test_finite_all_witness_for_three_in_characteristic_two():
    witness = witness_finite_all([3], 2)
    field = gf_construct(2, 3)
    assert witness.field == field
    assert witness.report.accepted
    t = field.generator()
    assert witness.parameters["beta"] == "t^2+t+1"
    assert witness.parameters["beta"] == str((t ** 4 - t).inverse())
    assert witness.parameters["gamma"] == str((t ** 2 - t).inverse())
    assert witness.assignment["y1"] == SkewPolynomial.frobenius_generator(field)


def test_finite_all_rejects_alpha_in_a_forbidden_subfield():
    with pytest.raises(ForbiddenSubfieldError):
        witness_finite_all([3], 2, alpha=gf_construct(2, 3).one())
    with pytest.raises(ForbiddenSubfieldError):
        witness_finite_all([3], 2, alpha=gf_construct(2, 2).generator())


def test_finite_all_domain_errors():
    with pytest.raises(SystemDomainError):
        witness_finite_all([3], 3)
    with pytest.raises(NotPrimeError):
        witness_finite_all([3], 4)


@pytest.mark.parametrize("p, degree", [(2, 6), (5, 6), (11, 6)])
def test_root_of_unity_witness_is_accepted(p, degree):
    witness = witness_root_of_unity(3, p)
    assert witness.field == gf_construct(p, degree)
    assert witness.parameters["m"] == 9
    assert witness.parameters["k"] == 3
    assert witness.report.accepted
    assert witness.assignment["z2"] != witness.assignment["z3"]


@pytest.mark.parametrize("p", [7, 13])
def test_root_of_unity_obstruction_when_p_is_one_mod_n(p):
    with pytest.raises(RootOfUnityObstruction):
        witness_root_of_unity(3, p)


def test_root_of_unity_needs_p_coprime_to_n_and_m():
    with pytest.raises(NotCoprimeError):
        witness_root_of_unity(3, 3)
    # n = 5 gives m = 10, which p = 2 divides
    with pytest.raises(NotCoprimeError):
        witness_root_of_unity(5, 2)
