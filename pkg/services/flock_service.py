# flock_service.py
"""
Flocks: maps alpha -> V_alpha from Z^E to d-dimensional subspaces.

A phi-linear flock satisfies
    LF1   V_alpha / i = V_(alpha + e_i) minus i     for every i in E
    LF2   V_(alpha + 1) = phi V_alpha
with phi = F^e a power of the Frobenius. Flocks are evaluated lazily and
memoized per instance in a bounded LRU cache; windows are finite boxes used only for verification
and for the support matroid, which is therefore always window-relative.
"""
import itertools
import logging
import random
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from services.finite_field import FieldDescriptor, gf_construct
from services.linear_algebra import (
    RationalMatrix,
    Subspace,
    apply_automorphism,
    base_change,
    direct_sum_along_partition,
    orthogonal_complement,
    p_reduce,
    restrict,
    subspace_contract,
    subspace_delete,
)
from services.matroid import Matroid, matroid_from_subspace
from utils.config import (
    DEFAULT_ENUMERATION_LIMIT,
    DEFAULT_WINDOW_BUDGET,
    EXCHANGE_CHECK_MAX_ELEMENTS,
    FLOCK_CACHE_SIZE,
    LF1_PRIME_SAMPLE_SIZE,
    Settings,
)
from utils.errors import (
    DependentRowsError,
    DimensionMismatchError,
    EnumerationTooLargeError,
    FieldMismatchError,
    IncompatibleAutomorphismError,
    MalformedInputError,
    OutOfWindowError,
)
from utils.utils import parallel_map

logger = logging.getLogger(__name__)

Point = Tuple[int, ...]

SUPPORT_CAVEAT = "support computed on a finite window; bases realized only outside it are not included"


@dataclass(frozen=True)
class Window:
    ground: Tuple[str, ...]
    lower: Point
    upper: Point

    def __post_init__(self):
        if not (len(self.ground) == len(self.lower) == len(self.upper)):
            raise DimensionMismatchError("window bounds must match the ground set")
        if any(low > high for low, high in zip(self.lower, self.upper)):
            raise MalformedInputError(f"window lower bound {list(self.lower)} exceeds upper {list(self.upper)}")

    @classmethod
    def box(cls, ground: Sequence[str], radius: int) -> "Window":
        """The cube [-radius, radius]^E."""
        size = len(ground)
        return cls(tuple(ground), (-radius,) * size, (radius,) * size)

    @classmethod
    def from_bounds(cls, ground: Sequence[str], lower: Sequence[int], upper: Sequence[int]) -> "Window":
        return cls(tuple(ground), tuple(int(x) for x in lower), tuple(int(x) for x in upper))

    @property
    def size(self) -> int:
        count = 1
        for low, high in zip(self.lower, self.upper):
            count *= high - low + 1
        return count

    def contains(self, alpha: Sequence[int]) -> bool:
        return all(low <= a <= high for a, low, high in zip(alpha, self.lower, self.upper))

    def scaled(self, factor: int) -> "Window":
        return Window(self.ground, tuple(factor * x for x in self.lower), tuple(factor * x for x in self.upper))


def window_points(w: Window) -> Iterator[Point]:
    """Points of the window in lexicographic order."""
    return itertools.product(*(range(low, high + 1) for low, high in zip(w.lower, w.upper)))


def default_window(ground: Sequence[str], radius: int = 1, budget: int = DEFAULT_WINDOW_BUDGET) -> Window:
    """[-radius, radius]^E, shrunk until it holds at most budget points."""
    while radius > 0 and (2 * radius + 1) ** len(ground) > budget:
        radius -= 1
    return Window.box(ground, radius)


def _point(alpha: Sequence[int], size: int) -> Point:
    point = tuple(int(a) for a in alpha)
    if len(point) != size:
        raise DimensionMismatchError(f"alpha has {len(point)} entries for a ground set of size {size}")
    return point


class Flock:
    """Base flock; subclasses supply _evaluate."""

    kind = "flock"

    def __init__(self, ground: Sequence[str], field: FieldDescriptor, exponent: int):
        self.ground = tuple(ground)
        self.field = field
        self.exponent = exponent
        self._cached_evaluate = lru_cache(maxsize=FLOCK_CACHE_SIZE)(self._evaluate)

    def at(self, alpha: Sequence[int]) -> Subspace:
        return self._cached_evaluate(_point(alpha, len(self.ground)))

    def cache_info(self):
        return self._cached_evaluate.cache_info()

    def _evaluate(self, alpha: Point) -> Subspace:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"{type(self).__name__}(ground={list(self.ground)}, field={self.field.label()}, e={self.exponent})"


class ValuationFlock(Flock):
    """V_alpha = p_reduce(A, p, alpha); the automorphism is trivial."""

    kind = "valuation"

    def __init__(self, matrix: RationalMatrix, p: int):
        super().__init__(matrix.ground, gf_construct(p, 1), 0)
        self.matrix = matrix
        self.p = p

    def _evaluate(self, alpha: Point) -> Subspace:
        return p_reduce(self.matrix, self.p, alpha)


class StretchedFlock(Flock):
    """
    psi-linear flock V' built from a psi^m-linear flock V.

    For beta = m * alpha + r with 0 <= r_i < m, let I_k = {i : r_i = k}. Then
    V'_beta is the direct sum over k of psi^k (V_alpha / I_(>k) minus I_(<k)),
    each summand living on the coordinates I_k.
    """

    kind = "stretched"

    def __init__(self, inner: Flock, m: int, field: FieldDescriptor, exponent: int):
        super().__init__(inner.ground, field, exponent)
        self.inner = inner
        self.m = m

    def _evaluate(self, beta: Point) -> Subspace:
        alpha = tuple(b // self.m for b in beta)
        remainders = [b - self.m * a for a, b in zip(alpha, beta)]
        value = base_change(self.inner.at(alpha), self.field)
        parts = []
        for k in range(self.m):
            block = [label for label, r in zip(self.ground, remainders) if r == k]
            if not block:
                continue
            later = [label for label, r in zip(self.ground, remainders) if r > k]
            earlier = [label for label, r in zip(self.ground, remainders) if r < k]
            piece = subspace_delete(subspace_contract(value, later), earlier)
            parts.append(apply_automorphism(piece, k * self.exponent))
        return direct_sum_along_partition(parts, ground=self.ground)


class DualFlock(Flock):
    """V*_alpha = (V_(-alpha))^perp, with the inverse automorphism."""

    kind = "dual"

    def __init__(self, inner: Flock):
        super().__init__(inner.ground, inner.field, -inner.exponent)
        self.inner = inner

    def _evaluate(self, alpha: Point) -> Subspace:
        return orthogonal_complement(self.inner.at(tuple(-a for a in alpha)))


class ExplicitWindowFlock(Flock):
    """A flock given by its values on a box; evaluation outside the box is an error."""

    kind = "explicit"

    def __init__(self, window: Window, values: Mapping[Point, Subspace], field: FieldDescriptor, exponent: int):
        super().__init__(window.ground, field, exponent)
        self.window = window
        self.values = {tuple(alpha): value for alpha, value in values.items()}

    def _evaluate(self, alpha: Point) -> Subspace:
        if not self.window.contains(alpha) or alpha not in self.values:
            raise OutOfWindowError(f"alpha = {list(alpha)} is outside the stored window", alpha=list(alpha))
        return self.values[alpha]


def valuation_flock(A: RationalMatrix, p: int) -> ValuationFlock:
    """
    Raises:
        DependentRowsError: If the rows of A are dependent over Q
        NotPrimeError: If p is not prime
    """
    gf_construct(p, 1)
    if A.rank < len(A.rows):
        raise DependentRowsError("rows of the rational matrix are linearly dependent")
    return ValuationFlock(A, p)


def flock_at(f: Flock, alpha: Sequence[int]) -> Subspace:
    return f.at(alpha)


def stretch_flock(f: Flock, m: int, field: Optional[FieldDescriptor] = None, exponent: int = -1) -> Flock:
    """
    Stretch f by m into a flock with automorphism F^exponent over field.

    The field defaults to GF(p^(m * m0)) for f over GF(p^m0). Values of f are
    base changed into it, so f must live over the prime field unless the
    fields agree.

    Raises:
        IncompatibleAutomorphismError: If m * exponent differs from f's exponent on f's field
        FieldMismatchError: If field does not extend f's field
    """
    if m < 1:
        raise MalformedInputError(f"stretch factor must be at least 1, got {m}")
    if m == 1 and field is None:
        return f
    target = field if field is not None else gf_construct(f.field.p, f.field.m * m)
    if target.p != f.field.p or target.m % f.field.m:
        raise FieldMismatchError(f"{target.label()} does not extend {f.field.label()}")
    if target != f.field and not f.field.is_prime_field:
        raise FieldMismatchError(f"values over {f.field.label()} cannot be base changed to {target.label()}")
    if (m * exponent - f.exponent) % f.field.m:
        raise IncompatibleAutomorphismError(
            f"(F^{exponent})^{m} does not act as F^{f.exponent} on {f.field.label()}",
            m=m, exponent=exponent, inner_exponent=f.exponent,
        )
    return StretchedFlock(f, m, target, exponent)


def dual_flock(f: Flock) -> DualFlock:
    return DualFlock(f)


def explicit_window_from(f: Flock, box: Window) -> ExplicitWindowFlock:
    """Freeze f's values on a box into an explicit flock."""
    values = {point: f.at(point) for point in window_points(box)}
    return ExplicitWindowFlock(box, values, f.field, f.exponent)


def lf1_prime_subsets(ground: Sequence[str], sample_size: int = LF1_PRIME_SAMPLE_SIZE,
                      seed: Optional[int] = None) -> List[Tuple[str, ...]]:
    """
    Subsets I with |I| >= 2 for the LF1' check: all of them when few enough,
    otherwise a seeded random sample of sample_size distinct ones.
    """
    size = len(ground)
    total = 2 ** size - size - 1
    if total <= sample_size:
        return [subset for r in range(2, size + 1) for subset in itertools.combinations(ground, r)]
    rng = random.Random(seed)
    masks = set()
    while len(masks) < sample_size:
        mask = rng.randrange(1, 2 ** size)
        if bin(mask).count("1") >= 2:
            masks.add(mask)
    return [tuple(label for index, label in enumerate(ground) if mask >> index & 1) for mask in sorted(masks)]


@dataclass
class AxiomReport:
    window: Window
    points_checked: int
    subsets: List[Tuple[str, ...]]
    violations: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def counts(self) -> Dict[str, int]:
        tally: Dict[str, int] = {}
        for violation in self.violations:
            tally[violation["axiom"]] = tally.get(violation["axiom"], 0) + 1
        return tally


def _shift(alpha: Point, positions: Sequence[int]) -> Point:
    shifted = list(alpha)
    for index in positions:
        shifted[index] += 1
    return tuple(shifted)


def _check_point(f: Flock, alpha: Point, subsets: Sequence[Tuple[str, ...]], dimension: int) -> List[Dict[str, Any]]:
    found = []
    value = f.at(alpha)
    if value.dim != dimension:
        found.append({"axiom": "dimension", "alpha": list(alpha), "dim": value.dim, "expected": dimension})
    for index, label in enumerate(f.ground):
        if subspace_contract(value, [label]) != subspace_delete(f.at(_shift(alpha, [index])), [label]):
            found.append({"axiom": "LF1", "alpha": list(alpha), "element": label})
    all_ones = _shift(alpha, range(len(f.ground)))
    if f.at(all_ones) != apply_automorphism(value, f.exponent):
        found.append({"axiom": "LF2", "alpha": list(alpha)})
    for subset in subsets:
        positions = [f.ground.index(label) for label in subset]
        if subspace_contract(value, subset) != subspace_delete(f.at(_shift(alpha, positions)), subset):
            found.append({"axiom": "LF1'", "alpha": list(alpha), "subset": list(subset)})
    return found


def _check_budget(w: Window, budget: int) -> None:
    if w.size > budget:
        raise EnumerationTooLargeError(f"window holds {w.size} points, above the budget {budget}", budget=budget)


def check_axioms(
    f: Flock,
    w: Window,
    sample_size: int = LF1_PRIME_SAMPLE_SIZE,
    seed: Optional[int] = None,
    budget: int = DEFAULT_WINDOW_BUDGET,
    threads: int = 1,
) -> AxiomReport:
    """
    Check LF1, LF2 and LF1' at every point of the window, plus constant dimension.

    Violations are returned in the report, ordered by point.

    Raises:
        EnumerationTooLargeError: If the window exceeds the budget
        OutOfWindowError: If an explicit flock is asked for a shift outside its box
    """
    if w.ground != f.ground:
        raise DimensionMismatchError(f"window ground {list(w.ground)} differs from flock ground {list(f.ground)}")
    _check_budget(w, budget)
    points = list(window_points(w))
    subsets = lf1_prime_subsets(f.ground, sample_size, seed)
    dimension = f.at(points[0]).dim
    results = parallel_map(lambda alpha: _check_point(f, alpha, subsets, dimension), points, threads=threads,
                           description="flock axioms")
    report = AxiomReport(w, len(points), subsets, [violation for found in results for violation in found])
    logger.info("checked %d points of %r: %d violations", len(points), f, len(report.violations))
    return report


@dataclass
class SupportReport:
    matroid: Matroid
    window: Window
    is_matroid: Optional[bool]
    caveat: str = SUPPORT_CAVEAT


def support_matroid(
    f: Flock,
    w: Window,
    limit: int = DEFAULT_ENUMERATION_LIMIT,
    budget: int = DEFAULT_WINDOW_BUDGET,
    threads: int = 1,
) -> SupportReport:
    """
    Union of the bases of M(V_alpha) over alpha in the window.

    The union is returned unchecked; is_matroid records whether it passes the
    basis-exchange test (None when the ground set is too large to test).

    Raises:
        EnumerationTooLargeError: If the window or a basis enumeration exceeds its limit
    """
    _check_budget(w, budget)
    points = list(window_points(w))
    matroids = parallel_map(lambda alpha: matroid_from_subspace(f.at(alpha), limit), points, threads=threads,
                            description="support matroid")
    bases = frozenset().union(*(matroid.bases for matroid in matroids))
    union = Matroid(f.ground, matroids[0].rank, bases)
    is_matroid = union.satisfies_exchange() if len(f.ground) <= EXCHANGE_CHECK_MAX_ELEMENTS else None
    return SupportReport(union, w, is_matroid)


def check_stretch_support(inner: Flock, stretched: StretchedFlock, w: Window,
                          budget: int = DEFAULT_WINDOW_BUDGET) -> List[Dict[str, Any]]:
    """
    For every beta in the window and every d-subset B, check
    dim(V'_beta minus (E - B)) <= dim(V_floor(beta/m) minus (E - B)). Returns the failures.

    Projections are compared: B is a basis of M(V) exactly when V minus (E - B)
    is all of K^B, so the inequality keeps every stretched basis inside the
    inner support.
    """
    _check_budget(w, budget)
    failures = []
    for beta in window_points(w):
        alpha = tuple(b // stretched.m for b in beta)
        outer_value, inner_value = stretched.at(beta), inner.at(alpha)
        for basis in itertools.combinations(inner.ground, inner_value.dim):
            outer_dim = restrict(outer_value, basis).dim
            inner_dim = restrict(inner_value, basis).dim
            if outer_dim > inner_dim:
                failures.append({"beta": list(beta), "basis": list(basis), "stretched": outer_dim, "inner": inner_dim})
    return failures


class FlockService:
    """
    Window checks of flocks under one Settings.

    Attributes:
        settings (Settings): Thread count, seed, window budget and enumeration limit
    """

    def __init__(self, settings: Settings):
        self.settings = settings

    def window_for(self, f: Flock) -> Window:
        """The largest box within budget; stretched flocks get radius m so one inner step fits."""
        radius = f.m if isinstance(f, StretchedFlock) else 1
        return default_window(f.ground, radius, self.settings.window_budget)

    def check(self, f: Flock, w: Window, sample_size: int = LF1_PRIME_SAMPLE_SIZE) -> AxiomReport:
        return check_axioms(f, w, sample_size=sample_size, seed=self.settings.seed,
                            budget=self.settings.window_budget, threads=self.settings.threads)

    def support(self, f: Flock, w: Window) -> SupportReport:
        return support_matroid(f, w, limit=self.settings.enumeration_limit, budget=self.settings.window_budget,
                               threads=self.settings.threads)
