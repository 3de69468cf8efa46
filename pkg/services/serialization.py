# serialization.py
"""
JSON codecs for the library's objects.

Big integers and rationals travel as decimal text ("12", "-3/4") so that no
consumer loses precision. Every decoder raises MalformedInputError on input
it cannot read.
"""
from fractions import Fraction
from typing import Any, Dict, List, Union

from services.equation_system import Equation, EquationSystem
from services.finite_field import FieldDescriptor, FieldElement, gf_construct, gf_is_irreducible
from services.flock_service import (
    DualFlock,
    ExplicitWindowFlock,
    Flock,
    StretchedFlock,
    ValuationFlock,
    Window,
    dual_flock,
    stretch_flock,
    valuation_flock,
)
from services.int_polynomial import IntPolynomial, parse_int_polynomial
from services.linear_algebra import RATIONALS, Coefficients, RationalMatrix, Subspace
from services.matroid import Matroid
from services.skew_polynomial import SkewPolynomial
from utils.config import SCHEMA_VERSION
from utils.errors import CharsetError, MalformedInputError

RING_FIELD = "field"
RING_SKEW = "skew"
RING_INTEGER_POLYNOMIAL = "intpoly"


def with_schema(payload: Dict[str, Any]) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, **payload}


def _require(document: Any, *keys: str) -> Dict[str, Any]:
    if not isinstance(document, dict):
        raise MalformedInputError(f"expected a JSON object, got {type(document).__name__}")
    missing = [key for key in keys if key not in document]
    if missing:
        raise MalformedInputError(f"JSON object lacks {missing}")
    version = document.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise MalformedInputError(f"unsupported schema_version {version!r}")
    return document


def _to_int(text: Any) -> int:
    try:
        return int(text)
    except (TypeError, ValueError):
        raise MalformedInputError(f"not an integer: {text!r}")


def rational_text(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def encode_field(field: FieldDescriptor) -> Dict[str, Any]:
    return {"p": field.p, "m": field.m, "modulus": [str(c) for c in field.modulus]}


def decode_field(document: Any) -> FieldDescriptor:
    """A field descriptor; without a modulus the canonical one is constructed."""
    data = _require(document, "p", "m")
    p, m = _to_int(data["p"]), _to_int(data["m"])
    canonical = gf_construct(p, m)
    if "modulus" not in data:
        return canonical
    modulus = tuple(_to_int(c) for c in data["modulus"])
    if modulus == canonical.modulus:
        return canonical
    if len(modulus) != m + 1 or modulus[-1] != 1 or (m > 1 and not gf_is_irreducible(p, modulus)):
        raise MalformedInputError(f"modulus {list(modulus)} is not monic irreducible of degree {m} over GF({p})")
    return FieldDescriptor(p, m, modulus)


def encode_coefficients(field: Coefficients) -> Union[str, Dict[str, Any]]:
    return RATIONALS if field == RATIONALS else encode_field(field)


def decode_coefficients(document: Any) -> Coefficients:
    return RATIONALS if document == RATIONALS else decode_field(document)


def encode_element(x: FieldElement) -> List[str]:
    return [str(c) for c in x.coeffs]


def decode_element(field: FieldDescriptor, document: Any) -> FieldElement:
    if isinstance(document, (int, str)):
        return field.element(_to_int(document))
    if not isinstance(document, list):
        raise MalformedInputError(f"field element must be a coefficient list, got {document!r}")
    try:
        return field.element([_to_int(c) for c in document])
    except CharsetError as error:
        raise MalformedInputError(error.message)


def encode_skew(a: SkewPolynomial) -> Dict[str, Any]:
    return {"field": encode_field(a.field), "coeffs": [encode_element(c) for c in a.coeffs]}


def decode_skew(document: Any) -> SkewPolynomial:
    data = _require(document, "field", "coeffs")
    field = decode_field(data["field"])
    return SkewPolynomial(field, tuple(decode_element(field, c) for c in data["coeffs"]))


def encode_int_polynomial(a: IntPolynomial) -> Dict[str, Any]:
    return {"text": str(a), "coeffs": [str(c) for c in a.coeffs]}


def decode_int_polynomial(document: Any) -> IntPolynomial:
    if isinstance(document, str):
        return parse_int_polynomial(document)
    data = _require(document)
    if "coeffs" in data:
        return IntPolynomial(tuple(_to_int(c) for c in data["coeffs"]))
    if "text" in data:
        return parse_int_polynomial(data["text"])
    raise MalformedInputError("integer polynomial needs 'coeffs' or 'text'")


def encode_rational_matrix(A: RationalMatrix) -> Dict[str, Any]:
    return {"ground": list(A.ground), "rows": [[rational_text(x) for x in row] for row in A.rows]}


def decode_rational_matrix(document: Any) -> RationalMatrix:
    data = _require(document, "rows")
    rows = data["rows"]
    if not isinstance(rows, list) or not all(isinstance(row, list) for row in rows):
        raise MalformedInputError("rows must be a list of lists")
    return RationalMatrix.from_rows([[str(x) for x in row] for row in rows], data.get("ground"))


def _encode_scalar(value) -> Union[str, List[str]]:
    return rational_text(value) if isinstance(value, Fraction) else encode_element(value)


def encode_subspace(V: Subspace) -> Dict[str, Any]:
    return {
        "ground": list(V.ground),
        "field": encode_coefficients(V.field),
        "dim": V.dim,
        "rows": [[_encode_scalar(x) for x in row] for row in V.rows],
    }


def decode_subspace(document: Any) -> Subspace:
    data = _require(document, "ground", "field", "rows")
    field = decode_coefficients(data["field"])
    if field == RATIONALS:
        rows = [[str(x) for x in row] for row in data["rows"]]
    else:
        rows = [[decode_element(field, x) for x in row] for row in data["rows"]]
    return Subspace.from_rows(data["ground"], field, rows)


def encode_matroid(M: Matroid) -> Dict[str, Any]:
    return {"ground": list(M.ground), "rank": M.rank, "bases": M.basis_sets()}


def decode_matroid(document: Any, check: bool = True) -> Matroid:
    data = _require(document, "ground", "bases")
    matroid = Matroid.from_bases(data["ground"], data["bases"], check=check)
    if "rank" in data and _to_int(data["rank"]) != matroid.rank:
        raise MalformedInputError(f"declared rank {data['rank']} differs from basis size {matroid.rank}")
    return matroid


def encode_system(S: EquationSystem) -> Dict[str, Any]:
    return {
        "family": S.family,
        "vars": list(S.variables),
        "equations": [
            {"kind": eq.kind, "target": eq.target, "left": eq.left, "right": eq.right} for eq in S.equations
        ],
    }


def decode_system(document: Any) -> EquationSystem:
    """Reads "vars"; the older "variables" key is still accepted."""
    data = _require(document, "equations")
    if "vars" not in data and "variables" not in data:
        raise MalformedInputError("JSON object lacks ['vars']")
    names = data["vars"] if "vars" in data else data["variables"]
    equations = []
    for entry in data["equations"]:
        eq = _require(entry, "kind", "target", "left", "right")
        equations.append(Equation(eq["kind"], str(eq["target"]), str(eq["left"]), str(eq["right"])))
    return EquationSystem(tuple(str(name) for name in names), tuple(equations), data.get("family"))


def _ring_of(value: Any) -> str:
    if isinstance(value, SkewPolynomial):
        return RING_SKEW
    if isinstance(value, IntPolynomial):
        return RING_INTEGER_POLYNOMIAL
    return RING_FIELD


def encode_assignment(A: Dict[str, Any]) -> Dict[str, Any]:
    """Ring-tagged assignment; the ring is read off the first value."""
    if not A:
        return {"ring": RING_FIELD, "values": {}}
    sample = next(iter(A.values()))
    ring = _ring_of(sample)
    if ring == RING_SKEW:
        values = {name: [encode_element(c) for c in value.coeffs] for name, value in A.items()}
        return {"ring": ring, "field": encode_field(sample.field), "values": values}
    if ring == RING_INTEGER_POLYNOMIAL:
        return {"ring": ring, "values": {name: str(value) for name, value in A.items()}}
    return {"ring": ring, "field": encode_field(sample.field), "values": {n: encode_element(v) for n, v in A.items()}}


def decode_assignment(document: Any) -> Dict[str, Any]:
    data = _require(document, "ring", "values")
    ring = data["ring"]
    values = data["values"]
    if not isinstance(values, dict):
        raise MalformedInputError("assignment values must be an object keyed by variable")
    if ring == RING_INTEGER_POLYNOMIAL:
        return {name: decode_int_polynomial(value) for name, value in values.items()}
    if ring not in (RING_FIELD, RING_SKEW):
        raise MalformedInputError(f"unknown ring {ring!r}")
    field = decode_field(_require(data, "field")["field"])
    if ring == RING_FIELD:
        return {name: decode_element(field, value) for name, value in values.items()}
    return {
        name: SkewPolynomial(field, tuple(decode_element(field, c) for c in value)) for name, value in values.items()
    }


def encode_window(w: Window) -> Dict[str, Any]:
    return {"ground": list(w.ground), "lower": list(w.lower), "upper": list(w.upper)}


def decode_window(document: Any) -> Window:
    data = _require(document, "ground", "lower", "upper")
    return Window.from_bounds([str(label) for label in data["ground"]], [_to_int(x) for x in data["lower"]],
                              [_to_int(x) for x in data["upper"]])


def encode_flock(f: Flock) -> Dict[str, Any]:
    if isinstance(f, ValuationFlock):
        return {"kind": f.kind, "matrix": encode_rational_matrix(f.matrix), "p": f.p}
    if isinstance(f, StretchedFlock):
        return {"kind": f.kind, "inner": encode_flock(f.inner), "m": f.m, "field": encode_field(f.field),
                "exponent": f.exponent}
    if isinstance(f, DualFlock):
        return {"kind": f.kind, "inner": encode_flock(f.inner)}
    if isinstance(f, ExplicitWindowFlock):
        return {
            "kind": f.kind,
            "window": encode_window(f.window),
            "field": encode_field(f.field),
            "exponent": f.exponent,
            "values": [{"alpha": list(alpha), "subspace": encode_subspace(value)}
                       for alpha, value in sorted(f.values.items())],
        }
    raise MalformedInputError(f"cannot encode flock of type {type(f).__name__}")


def decode_flock(document: Any) -> Flock:
    data = _require(document, "kind")
    kind = data["kind"]
    if kind == ValuationFlock.kind:
        _require(data, "matrix", "p")
        return valuation_flock(decode_rational_matrix(data["matrix"]), _to_int(data["p"]))
    if kind == StretchedFlock.kind:
        _require(data, "inner", "m")
        field = decode_field(data["field"]) if "field" in data else None
        return stretch_flock(decode_flock(data["inner"]), _to_int(data["m"]), field,
                             _to_int(data.get("exponent", -1)))
    if kind == DualFlock.kind:
        return dual_flock(decode_flock(_require(data, "inner")["inner"]))
    if kind == ExplicitWindowFlock.kind:
        _require(data, "window", "field", "values")
        window = decode_window(data["window"])
        values = {}
        for entry in data["values"]:
            item = _require(entry, "alpha", "subspace")
            values[tuple(_to_int(a) for a in item["alpha"])] = decode_subspace(item["subspace"])
        return ExplicitWindowFlock(window, values, decode_field(data["field"]), _to_int(data.get("exponent", 0)))
    raise MalformedInputError(f"unknown flock kind {kind!r}")
