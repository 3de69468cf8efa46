# test_serialization.py
from fractions import Fraction

import pytest

from services.equation_system import build_phi_n
from services.finite_field import gf_construct
from services.flock_service import StretchedFlock, ValuationFlock, Window, explicit_window_from, valuation_flock
from services.int_polynomial import parse_int_polynomial
from services.linear_algebra import RATIONALS, Subspace
from services.matroid import uniform_matroid
from services.serialization import (
    decode_assignment,
    decode_field,
    decode_flock,
    decode_int_polynomial,
    decode_matroid,
    decode_rational_matrix,
    decode_subspace,
    decode_system,
    encode_assignment,
    encode_flock,
    encode_subspace,
    encode_system,
    rational_text,
    with_schema,
)
from services.skew_polynomial import SkewPolynomial
from utils.errors import MalformedInputError
from utils.utils import load_json_file


def test_bundled_matrix_and_matroid(files_dir, u24_matrix):
    assert decode_rational_matrix(load_json_file(files_dir / "matrix_u24.json")) == u24_matrix
    assert decode_matroid(load_json_file(files_dir / "matroid_u24.json")).bases == uniform_matroid(2, 4).bases


def test_bundled_valuation_flock(files_dir, u24_matrix):
    f = decode_flock(load_json_file(files_dir / "flock_valuation_u24_p2.json"))
    assert isinstance(f, ValuationFlock)
    assert f.p == 2
    assert f.matrix == u24_matrix


def test_bundled_stretched_flock(files_dir, gf9):
    f = decode_flock(load_json_file(files_dir / "flock_stretched_gf9.json"))
    assert isinstance(f, StretchedFlock)
    assert f.field == gf9
    assert f.m == 2
    assert f.exponent == -1
    assert f.at((1, 0)) == Subspace.from_rows(["1", "2"], gf9, [[1, 0]])


def test_bundled_system(files_dir):
    S = decode_system(load_json_file(files_dir / "system_phi3.json"))
    assert S.variables == build_phi_n(3).variables
    assert S.equations == build_phi_n(3).equations


def test_system_documents_list_vars():
    document = {
        "vars": ["x0", "x1", "y1", "a"],
        "equations": [{"kind": "sum", "target": "a", "left": "y1", "right": "x1"}],
    }
    S = decode_system(document)
    assert S.variables == ("x0", "x1", "y1", "a")
    assert S.free_variables() == ["y1"]
    encoded = encode_system(build_phi_n(3))
    assert encoded["vars"] == list(build_phi_n(3).variables)
    assert "variables" not in encoded


def test_system_documents_with_the_older_key():
    legacy = {"variables": ["x0", "x1", "y1"], "equations": []}
    assert decode_system(legacy).variables == ("x0", "x1", "y1")
    with pytest.raises(MalformedInputError):
        decode_system({"equations": []})


def test_explicit_flock_survives_encoding(gf3):
    f = explicit_window_from(valuation_flock(decode_rational_matrix({"rows": [["1", "1"]]}), 3),
                             Window.box(["1", "2"], 1))
    decoded = decode_flock(encode_flock(f))
    assert decoded.window == f.window
    assert decoded.at((1, 0)) == f.at((1, 0))


def test_subspace_codec(gf9):
    t = gf9.generator()
    V = Subspace.from_rows(["a", "b"], gf9, [[1, t]])
    document = encode_subspace(V)
    assert document["dim"] == 1
    assert decode_subspace(document) == V
    rational = Subspace.from_rows(["a", "b"], RATIONALS, [["1/2", 1]])
    assert encode_subspace(rational)["rows"] == [["1", "2"]]


def test_rational_text():
    assert rational_text(Fraction(-3, 4)) == "-3/4"
    assert rational_text(Fraction(12)) == "12"


def test_assignment_ring_tags(gf9):
    skew = {"y1": SkewPolynomial.frobenius_generator(gf9)}
    assert encode_assignment(skew)["ring"] == "skew"
    assert decode_assignment(encode_assignment(skew)) == skew
    polynomial = {"w": parse_int_polynomial("t^4+3t^2+2t")}
    assert encode_assignment(polynomial) == {"ring": "intpoly", "values": {"w": "t^4+3t^2+2t"}}
    field = {"x1": gf9.one()}
    assert encode_assignment(field)["ring"] == "field"
    assert decode_assignment(encode_assignment(field)) == field


def test_int_polynomial_from_text_or_coefficients():
    assert decode_int_polynomial("t^2+1") == decode_int_polynomial({"coeffs": ["1", "0", "1"]})
    with pytest.raises(MalformedInputError):
        decode_int_polynomial({})


def test_field_modulus_must_be_irreducible():
    assert decode_field({"p": 2, "m": 2}) == gf_construct(2, 2)
    with pytest.raises(MalformedInputError):
        decode_field({"p": 2, "m": 2, "modulus": ["1", "0", "1"]})


@pytest.mark.parametrize(
    "decoder, document",
    [
        (decode_matroid, {"ground": ["1", "2"]}),
        (decode_matroid, {"ground": ["1", "2"], "rank": 2, "bases": [["1"]]}),
        (decode_rational_matrix, {"rows": "1,1"}),
        (decode_flock, {"kind": "tropical"}),
        (decode_assignment, {"ring": "matrix", "values": {}}),
        (decode_assignment, {"ring": "field", "values": []}),
        (decode_field, {"p": "two", "m": 1}),
        (decode_system, ["x0", "x1"]),
    ],
)
def test_malformed_documents(decoder, document):
    with pytest.raises(MalformedInputError):
        decoder(document)


def test_schema_version_is_checked():
    document = with_schema({"ground": ["1"], "bases": [["1"]]})
    assert document["schema_version"] == "1"
    assert decode_matroid(document).rank == 1
    with pytest.raises(MalformedInputError):
        decode_matroid(dict(document, schema_version="2"))
