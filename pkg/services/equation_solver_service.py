# equation_solver_service.py
"""
Propagation, verification and bounded search for equation systems.

Values may live in any ring whose elements support +, * and comparison with
the integers 0 and 1: finite field elements, skew polynomials, integer
polynomials or Fractions. Products are always evaluated in written order.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import divisors, primerange

from services.equation_system import ONE, SUM, ZERO, EquationSystem
from services.finite_field import FieldDescriptor, FieldElement
from services.int_polynomial import IntPolynomial
from utils.config import DEFAULT_SEARCH_LIMIT, Settings
from utils.errors import MissingVariableError, NotTriangularError, SearchTooLargeError
from utils.utils import parallel_map

logger = logging.getLogger(__name__)

Assignment = Dict[str, Any]

SYMBOLIC_VARIABLE = "y1"


@dataclass
class VerificationReport:
    violated_equations: List[Dict[str, Any]] = field(default_factory=list)
    collisions: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return not self.violated_equations and not self.collisions

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": "accept" if self.accepted else "reject",
            "violated_equations": self.violated_equations,
            "collisions": [list(pair) for pair in self.collisions],
        }


def _apply(kind: str, left, right):
    return left + right if kind == SUM else left * right


def evaluate_system(S: EquationSystem, free_values: Assignment, zero, one) -> Assignment:
    """
    Forward-propagate definitions from the free values; constraints are skipped.

    Raises:
        NotTriangularError: If an operand is used before it has a value
    """
    values: Assignment = {ZERO: zero, ONE: one}
    values.update(free_values)
    for index, equation in enumerate(S.equations):
        if equation.target in values:
            continue
        for operand in (equation.left, equation.right):
            if operand not in values:
                raise NotTriangularError(f"equation {index} ({equation}) uses {operand} before it is defined",
                                         operand=operand)
        values[equation.target] = _apply(equation.kind, values[equation.left], values[equation.right])
    return {name: values[name] for name in S.variables if name in values}


def propagate_symbolic(S: EquationSystem) -> Dict[str, IntPolynomial]:
    """
    Values of every variable as integer polynomials in t with y1 = t.

    Raises:
        NotTriangularError: If a variable other than y1 is never defined
    """
    free = S.free_variables()
    extra = [name for name in free if name != SYMBOLIC_VARIABLE]
    if extra:
        raise NotTriangularError(f"free variables besides {SYMBOLIC_VARIABLE}: {extra}", free=extra)
    start = {SYMBOLIC_VARIABLE: IntPolynomial.t()} if SYMBOLIC_VARIABLE in free else {}
    return evaluate_system(S, start, IntPolynomial(), IntPolynomial((1,)))


def phi_closed_forms(n: int) -> Dict[str, IntPolynomial]:
    """Predicted w and w_(2n-3) for phi_n."""
    t = IntPolynomial.t()
    return {
        "w": t ** (n + 1) + n * t ** (n - 1) + (n - 1) * t ** (n - 2),
        f"w{2 * n - 3}": t ** (n + 1) + (n - 1) * t ** (n - 1) + (n - 2) * t ** (n - 2),
    }


@dataclass
class BadSetReport:
    differences: List[Dict[str, Any]]
    per_prime: Dict[int, List[Tuple[str, str]]]
    degree_bound: int

    @property
    def verdict(self) -> bool:
        return all(not pairs for pairs in self.per_prime.values())

    def to_dict(self, include_differences: bool = True) -> Dict[str, Any]:
        payload = {
            "verdict": self.verdict,
            "degree_bound": self.degree_bound,
            "primes": {
                str(p): {"ok": not pairs, "vanishing": [list(pair) for pair in pairs]}
                for p, pairs in self.per_prime.items()
            },
        }
        if include_differences:
            payload["differences"] = self.differences
        return payload


def bad_set_certificate(S: EquationSystem, primes: Sequence[int]) -> BadSetReport:
    """
    Pairwise differences of the propagated values and, per prime, the pairs
    whose difference vanishes mod p. The number of bad values of t is at most
    the sum of the difference degrees.
    """
    values = propagate_symbolic(S)
    names = [name for name in S.variables if name in values]
    differences = []
    per_prime: Dict[int, List[Tuple[str, str]]] = {p: [] for p in primes}
    degree_bound = 0
    for first, second in itertools.combinations(names, 2):
        difference = values[first] - values[second]
        content = difference.content()
        if not difference.is_zero():
            degree_bound += difference.degree
        differences.append({"left": first, "right": second, "polynomial": str(difference),
                            "degree": difference.degree})
        for p in primes:
            # a nonzero difference vanishes mod p exactly when p divides every coefficient
            if content % p == 0:
                per_prime[p].append((first, second))
    return BadSetReport(differences, per_prime, degree_bound)


def verify_assignment(S: EquationSystem, A: Assignment) -> VerificationReport:
    """
    Check constants, every equation (constraints included) and distinctness.

    Raises:
        MissingVariableError: If A lacks a variable of S
    """
    missing = [name for name in S.variables if name not in A]
    if missing:
        raise MissingVariableError(f"assignment lacks {missing}", missing=missing)
    report = VerificationReport()
    if not A[ZERO] == 0:
        report.violated_equations.append({"index": None, "equation": "x0 = 0"})
    if not A[ONE] == 1:
        report.violated_equations.append({"index": None, "equation": "x1 = 1"})
    for index, equation in enumerate(S.equations):
        if not A[equation.target] == _apply(equation.kind, A[equation.left], A[equation.right]):
            report.violated_equations.append({"index": index, "equation": str(equation)})
    for first, second in itertools.combinations(S.variables, 2):
        if A[first] == A[second]:
            report.collisions.append((first, second))
    return report


@dataclass
class SearchResult:
    field: FieldDescriptor
    free_variables: List[str]
    examined: int
    solutions: List[Assignment]


def search_solutions(
    S: EquationSystem,
    field: FieldDescriptor,
    limit: int = DEFAULT_SEARCH_LIMIT,
    threads: int = 1,
) -> SearchResult:
    """
    Exhaustive search over the free variables in one finite field.

    Solutions come back in lexicographic order of the free values.

    Raises:
        SearchTooLargeError: If |field|^(number of free variables) exceeds the limit
    """
    free = S.free_variables()
    space = field.order ** len(free)
    if space > limit:
        raise SearchTooLargeError(
            f"{field.label()}^{len(free)} = {space} assignments exceed the search limit {limit}", free=free
        )
    elements = list(field.elements())
    zero, one = field.zero(), field.one()

    def search_branch(first_value: Optional[FieldElement]) -> List[Assignment]:
        found = []
        prefix = [first_value] if first_value is not None else []
        for rest in itertools.product(elements, repeat=max(len(free) - 1, 0)):
            combination = prefix + list(rest)
            values = evaluate_system(S, dict(zip(free, combination)), zero, one)
            if verify_assignment(S, values).accepted:
                found.append(values)
        return found

    branches = elements if free else [None]
    logger.info("searching %d assignments of %s over %s", space, free, field.label())
    results = parallel_map(search_branch, branches, threads=threads, description=f"search {field.label()}")
    solutions = [solution for branch in results for solution in branch]
    return SearchResult(field, free, space, solutions)


@dataclass
class FieldEvidence:
    field: FieldDescriptor
    examined: int
    solution_count: int
    first_solution: Optional[Assignment]


def characteristic_evidence(
    S: EquationSystem,
    fields: Sequence[FieldDescriptor],
    limit: int = DEFAULT_SEARCH_LIMIT,
    threads: int = 1,
) -> List[FieldEvidence]:
    """Bounded solvability evidence for one system across several fields."""
    evidence = []
    for target in fields:
        result = search_solutions(S, target, limit=limit, threads=threads)
        evidence.append(FieldEvidence(target, result.examined, len(result.solutions),
                                      result.solutions[0] if result.solutions else None))
    return evidence


def rational_roots(coeffs: Sequence[int]) -> List[Fraction]:
    """Rational roots of an integer polynomial (little-endian), by the rational root test."""
    poly = IntPolynomial(tuple(coeffs))
    if poly.is_zero():
        raise ValueError("every number is a root of the zero polynomial")
    roots = set()
    shift = next(index for index, c in enumerate(poly.coeffs) if c != 0)
    if shift:
        roots.add(Fraction(0))
    constant, leading = abs(poly.coeffs[shift]), abs(poly.coeffs[-1])
    for numerator in divisors(constant):
        for denominator in divisors(leading):
            for candidate in (Fraction(numerator, denominator), Fraction(-numerator, denominator)):
                if poly.evaluate(candidate) == 0:
                    roots.add(candidate)
    return sorted(roots)


def primes_below(bound: int) -> List[int]:
    return list(primerange(2, bound))


class EquationSolverService:
    def __init__(self, settings: Settings):
        self.settings = settings

    def search(self, S: EquationSystem, field: FieldDescriptor, limit: Optional[int] = None) -> SearchResult:
        """Exhaustive search capped by the configured search limit unless limit is given."""
        return search_solutions(S, field, limit=limit or self.settings.search_limit, threads=self.settings.threads)
