# linear_algebra.py
"""
Exact linear algebra over finite fields and the rationals.

Subspaces of K^E are stored by their canonical reduced row-echelon basis, so
two subspaces are equal exactly when their stored matrices are equal. The
scalar type is FieldElement for GF(p^m) and Fraction for the rationals; the
elimination routines only rely on the arithmetic operators of the scalars.
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, multiplicity

from services.finite_field import FieldDescriptor, FieldElement, gf_construct
from utils.errors import (
    DependentRowsError,
    DimensionMismatchError,
    FieldMismatchError,
    GroundSetError,
    MalformedInputError,
)

logger = logging.getLogger(__name__)

RATIONALS = "Q"

Scalar = Union[FieldElement, Fraction]
Coefficients = Union[FieldDescriptor, str]


def default_ground(size: int) -> Tuple[str, ...]:
    return tuple(str(index) for index in range(1, size + 1))


def make_scalar(field: Coefficients, value) -> Scalar:
    """Coerce an int, text, coefficient list or scalar into the coefficient domain."""
    if field == RATIONALS:
        if isinstance(value, FieldElement):
            raise FieldMismatchError("finite field element used as a rational")
        try:
            return Fraction(value)
        except (ValueError, TypeError, ZeroDivisionError):
            raise MalformedInputError(f"not a rational number: {value!r}")
    if isinstance(value, str):
        try:
            value = Fraction(value)
        except (ValueError, ZeroDivisionError):
            raise MalformedInputError(f"not a field element: {value!r}")
    if isinstance(value, Fraction):
        if value.denominator != 1:
            if value.denominator % field.p == 0:
                raise MalformedInputError(f"{value} has no image in {field.label()}")
            # a/b maps to a * b^-1 in the prime field
            return field.element(value.numerator) / field.element(value.denominator)
        value = value.numerator
    return field.element(value)


def rref(rows: Sequence[Sequence[Scalar]]) -> Tuple[Tuple[Tuple[Scalar, ...], ...], int, Tuple[int, ...]]:
    """
    Reduced row-echelon form.

    Returns:
        (canonical nonzero rows, rank, pivot columns)
    """
    matrix = [list(row) for row in rows]
    if not matrix:
        return (), 0, ()
    column_count = len(matrix[0])
    pivots: List[int] = []
    rank = 0
    for column in range(column_count):
        pivot_row = next((i for i in range(rank, len(matrix)) if matrix[i][column] != 0), None)
        if pivot_row is None:
            continue
        matrix[rank], matrix[pivot_row] = matrix[pivot_row], matrix[rank]
        inverse = 1 / matrix[rank][column]
        matrix[rank] = [entry * inverse for entry in matrix[rank]]
        for i in range(len(matrix)):
            if i != rank and matrix[i][column] != 0:
                factor = matrix[i][column]
                matrix[i] = [a - factor * b for a, b in zip(matrix[i], matrix[rank])]
        pivots.append(column)
        rank += 1
        if rank == len(matrix):
            break
    return tuple(tuple(row) for row in matrix[:rank]), rank, tuple(pivots)


def rank_of(rows: Sequence[Sequence[Scalar]]) -> int:
    return rref(rows)[1]


@dataclass(frozen=True)
class Subspace:
    ground: Tuple[str, ...]
    field: Coefficients
    rows: Tuple[Tuple[Scalar, ...], ...]

    @classmethod
    def from_rows(cls, ground: Sequence[str], field: Coefficients, rows: Iterable[Sequence]) -> "Subspace":
        ground = tuple(str(label) for label in ground)
        if len(set(ground)) != len(ground):
            raise GroundSetError(f"ground labels repeat: {list(ground)}")
        matrix = []
        for row in rows:
            if len(row) != len(ground):
                raise DimensionMismatchError(f"row of length {len(row)} for ground set of size {len(ground)}")
            matrix.append([make_scalar(field, entry) for entry in row])
        canonical, _, _ = rref(matrix)
        return cls(ground, field, canonical)

    @classmethod
    def full(cls, ground: Sequence[str], field: Coefficients) -> "Subspace":
        size = len(ground)
        return cls.from_rows(ground, field, [[1 if i == j else 0 for j in range(size)] for i in range(size)])

    @classmethod
    def zero(cls, ground: Sequence[str], field: Coefficients) -> "Subspace":
        return cls.from_rows(ground, field, [])

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def pivots(self) -> Tuple[int, ...]:
        return tuple(next(i for i, entry in enumerate(row) if entry != 0) for row in self.rows)

    def index_of(self, labels: Iterable[str]) -> List[int]:
        positions = {label: index for index, label in enumerate(self.ground)}
        missing = [label for label in labels if label not in positions]
        if missing:
            raise GroundSetError(f"labels {missing} not in ground set {list(self.ground)}")
        return [positions[label] for label in labels]

    def column_vectors(self, labels: Sequence[str]) -> List[Tuple[Scalar, ...]]:
        return [tuple(row[index] for row in self.rows) for index in self.index_of(labels)]

    def columns_rank(self, labels: Sequence[str]) -> int:
        if not labels or not self.rows:
            return 0
        return rank_of(self.column_vectors(labels))

    def zero_scalar(self) -> Scalar:
        return make_scalar(self.field, 0)


def _check_subset(V: Subspace, labels: Iterable[str]) -> set:
    subset = {str(label) for label in labels}
    extra = subset - set(V.ground)
    if extra:
        raise GroundSetError(f"{sorted(extra)} not contained in ground set {list(V.ground)}")
    return subset


def subspace_delete(V: Subspace, I: Iterable[str]) -> Subspace:
    """V minus I: projection of V onto the coordinates outside I."""
    removed = _check_subset(V, I)
    keep = [index for index, label in enumerate(V.ground) if label not in removed]
    ground = tuple(V.ground[index] for index in keep)
    canonical, _, _ = rref([[row[index] for index in keep] for row in V.rows])
    return Subspace(ground, V.field, canonical)


def restrict(V: Subspace, labels: Iterable[str]) -> Subspace:
    """Projection of V onto the given coordinates, kept in ground order."""
    kept = _check_subset(V, labels)
    return subspace_delete(V, [label for label in V.ground if label not in kept])


def subspace_contract(V: Subspace, I: Iterable[str]) -> Subspace:
    """V / I: vectors of V vanishing on I, projected onto the remaining coordinates."""
    removed = _check_subset(V, I)
    inside = [index for index, label in enumerate(V.ground) if label in removed]
    outside = [index for index, label in enumerate(V.ground) if label not in removed]
    ground = tuple(V.ground[index] for index in outside)
    reordered = [[row[index] for index in inside + outside] for row in V.rows]
    canonical, _, pivots = rref(reordered)
    # rows pivoting past the I block are zero on I and span the vanishing part
    kept = [row[len(inside):] for row, pivot in zip(canonical, pivots) if pivot >= len(inside)]
    final, _, _ = rref(kept)
    return Subspace(ground, V.field, final)


def orthogonal_complement(V: Subspace) -> Subspace:
    """Complement under the standard bilinear form sum x_i y_i."""
    size = len(V.ground)
    zero = V.zero_scalar()
    one = make_scalar(V.field, 1)
    pivots = V.pivots
    free = [column for column in range(size) if column not in pivots]
    basis = []
    for column in free:
        vector = [zero] * size
        vector[column] = one
        for row, pivot in zip(V.rows, pivots):
            vector[pivot] = -row[column]
        basis.append(vector)
    canonical, _, _ = rref(basis)
    return Subspace(V.ground, V.field, canonical)


def direct_sum_along_partition(parts: Sequence[Subspace], ground: Optional[Sequence[str]] = None) -> Subspace:
    """
    Block subspace on the disjoint union of the parts' ground sets.

    Args:
        parts: Subspaces on pairwise disjoint ground sets over one field
        ground: Optional column order for the result; must list exactly the union

    Raises:
        GroundSetError: If the parts overlap or ground does not match the union
        FieldMismatchError: If the parts use different fields
    """
    if not parts:
        raise GroundSetError("direct sum of no parts")
    field = parts[0].field
    union: List[str] = []
    for part in parts:
        if part.field != field:
            raise FieldMismatchError("direct sum parts over different fields")
        union.extend(part.ground)
    if len(set(union)) != len(union):
        raise GroundSetError(f"overlapping parts in direct sum: {union}")
    order = tuple(str(label) for label in ground) if ground is not None else tuple(union)
    if sorted(order) != sorted(union):
        raise GroundSetError(f"column order {list(order)} does not match the parts {union}")
    position = {label: index for index, label in enumerate(order)}
    zero = make_scalar(field, 0)
    rows = []
    for part in parts:
        for row in part.rows:
            full_row = [zero] * len(order)
            for label, entry in zip(part.ground, row):
                full_row[position[label]] = entry
            rows.append(full_row)
    canonical, _, _ = rref(rows)
    return Subspace(order, field, canonical)


def apply_automorphism(V: Subspace, e: int) -> Subspace:
    """Coordinatewise F^e; the identity over the rationals and when e = 0 mod m."""
    if V.field == RATIONALS or e % V.field.m == 0:
        return V
    canonical, _, _ = rref([[entry.frobenius(e) for entry in row] for row in V.rows])
    return Subspace(V.ground, V.field, canonical)


def base_change(V: Subspace, field: FieldDescriptor) -> Subspace:
    """Reinterpret a subspace over GF(p) inside GF(p^M)."""
    if V.field == field:
        return V
    if V.field == RATIONALS or V.field.m != 1 or V.field.p != field.p:
        raise FieldMismatchError(f"cannot base change {V.field} to {field.label()}")
    return Subspace(V.ground, field, tuple(tuple(field.element(entry.coeffs[0]) for entry in row) for row in V.rows))


def relabel(V: Subspace, ground: Sequence[str]) -> Subspace:
    if len(ground) != len(V.ground):
        raise DimensionMismatchError("relabeling must keep the ground set size")
    return Subspace(tuple(str(label) for label in ground), V.field, V.rows)


@dataclass(frozen=True)
class RationalMatrix:
    """Rows of exact rationals with labeled columns."""

    ground: Tuple[str, ...]
    rows: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], ground: Optional[Sequence[str]] = None) -> "RationalMatrix":
        converted = tuple(tuple(make_scalar(RATIONALS, entry) for entry in row) for row in rows)
        width = len(converted[0]) if converted else (len(ground) if ground else 0)
        if any(len(row) != width for row in converted):
            raise DimensionMismatchError("rational matrix rows have different lengths")
        labels = tuple(str(label) for label in ground) if ground is not None else default_ground(width)
        if len(labels) != width:
            raise DimensionMismatchError(f"{len(labels)} labels for {width} columns")
        return cls(labels, converted)

    @property
    def rank(self) -> int:
        return rank_of(self.rows)

    def row_space(self) -> Subspace:
        return Subspace(self.ground, RATIONALS, rref(self.rows)[0])


def determinant(matrix: Sequence[Sequence]) -> Union[int, Scalar]:
    """
    Exact determinant; fraction-free for integer matrices.

    Raises:
        DimensionMismatchError: If the matrix is not square
    """
    size = len(matrix)
    if any(len(row) != size for row in matrix):
        raise DimensionMismatchError("determinant of a non-square matrix")
    if size == 0:
        return 1
    if all(isinstance(entry, int) for row in matrix for entry in row):
        return int(Matrix(matrix).det(method="bareiss"))
    work = [list(row) for row in matrix]
    result = None
    sign = 1
    for column in range(size):
        pivot_row = next((i for i in range(column, size) if work[i][column] != 0), None)
        if pivot_row is None:
            return work[0][0] - work[0][0]
        if pivot_row != column:
            work[column], work[pivot_row] = work[pivot_row], work[column]
            sign = -sign
        pivot = work[column][column]
        result = pivot if result is None else result * pivot
        for i in range(column + 1, size):
            if work[i][column] != 0:
                factor = work[i][column] / pivot
                work[i] = [a - factor * b for a, b in zip(work[i], work[column])]
    return result if sign == 1 else -result


def p_adic_valuation(x: Fraction, p: int) -> Optional[int]:
    """v_p(x); None stands for the valuation of zero."""
    if x == 0:
        return None
    return multiplicity(p, abs(x.numerator)) - multiplicity(p, x.denominator)


def _residue(x: Fraction, p: int) -> int:
    return x.numerator * pow(x.denominator, -1, p) % p


def _make_primitive(row: List[Fraction], p: int) -> List[Fraction]:
    lowest = min(v for v in (p_adic_valuation(x, p) for x in row) if v is not None)
    if lowest == 0:
        return row
    scale = Fraction(p) ** (-lowest)
    return [x * scale for x in row]


def _left_dependency(reduced: List[List[int]], p: int) -> Optional[List[int]]:
    """A nonzero lambda with sum lambda_i row_i = 0 mod p, or None if the rows are independent."""
    count = len(reduced)
    width = len(reduced[0]) if reduced else 0
    augmented = [row[:] + [1 if j == i else 0 for j in range(count)] for i, row in enumerate(reduced)]
    rank = 0
    for column in range(width):
        pivot_row = next((i for i in range(rank, count) if augmented[i][column] % p), None)
        if pivot_row is None:
            continue
        augmented[rank], augmented[pivot_row] = augmented[pivot_row], augmented[rank]
        inverse = pow(augmented[rank][column], -1, p)
        augmented[rank] = [x * inverse % p for x in augmented[rank]]
        for i in range(count):
            if i != rank and augmented[i][column] % p:
                factor = augmented[i][column]
                augmented[i] = [(a - factor * b) % p for a, b in zip(augmented[i], augmented[rank])]
        rank += 1
    if rank == count:
        return None
    return augmented[rank][width:]


def p_reduce(W: RationalMatrix, p: int, alpha: Sequence[int]) -> Subspace:
    """
    Reduce the p-integral lattice of a rescaled rational row space modulo p.

    Coordinate i is scaled by p^(-alpha_i); the lattice is the scaled row
    space intersected with the p-integral vectors, and its reduction is a
    subspace of GF(p)^E of dimension rank(W).

    Raises:
        DimensionMismatchError: If alpha does not match the column count
        DependentRowsError: If the rows of W are dependent over Q
    """
    if len(alpha) != len(W.ground):
        raise DimensionMismatchError(f"alpha has {len(alpha)} entries for {len(W.ground)} columns")
    field = gf_construct(p, 1)
    if not W.rows:
        return Subspace.zero(W.ground, field)
    if W.rank < len(W.rows):
        raise DependentRowsError("rows of the rational matrix are linearly dependent")
    rows = [[x * Fraction(p) ** (-a) for x, a in zip(row, alpha)] for row in W.rows]
    while True:
        rows = [_make_primitive(row, p) for row in rows]
        reduced = [[_residue(x, p) for x in row] for row in rows]
        dependency = _left_dependency(reduced, p)
        if dependency is None:
            break
        target = max(index for index, coefficient in enumerate(dependency) if coefficient)
        combined = [
            sum((Fraction(coefficient) * row[column] for coefficient, row in zip(dependency, rows)), Fraction(0)) / p
            for column in range(len(W.ground))
        ]
        logger.debug("p_reduce: replacing row %d by a lattice vector divided by %d", target, p)
        rows[target] = combined
    canonical, _, _ = rref([[field.element(x) for x in row] for row in reduced])
    return Subspace(W.ground, field, canonical)
