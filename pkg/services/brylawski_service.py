# brylawski_service.py
"""
Brylawski matrices, b-sequences and Gordon-Brylawski prime sets.

For n = p_1 ... p_k + 1 and s = floor(log2 n), the b-sequence is
b_i = floor(n / 2^(s-i+1)); each b_i is 2 b_(i-1) plus the next binary digit
of n. A prime set is Gordon-Brylawski when no non-exempt difference b_j - b_i
is 0 or +-1 modulo any member.
"""
import itertools
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy import primerange

from services.finite_field import gf_construct
from services.linear_algebra import RATIONALS, Subspace, determinant
from services.matroid import is_circuit
from services.prime_service import consecutive_primes, prime_set_product
from utils.config import DEFAULT_SEARCH_LIMIT, Settings
from utils.errors import MalformedInputError, PrimeNotInSetError
from utils.utils import parallel_map

logger = logging.getLogger(__name__)

# Index pairs whose differences are always 1 and are skipped by the predicate
EXEMPT_PAIRS = frozenset({(0, 1), (1, 2)})
EXEMPT_NOTE = "pairs (0,1) and (1,2) are exempt: their differences equal 1 modulo every prime"

BASE_COLUMNS = {
    "v1": (1, 0, 0),
    "v2": (0, 1, 0),
    "v3": (0, 0, 1),
    "v4": (1, 1, 1),
    "v5": (1, 1, 0),
    "v6": (1, 0, 1),
}


@dataclass(frozen=True)
class BSequence:
    n: int
    s: int
    values: Tuple[int, ...]


def b_sequence(n: int) -> BSequence:
    if n < 2:
        raise MalformedInputError(f"the b-sequence needs n >= 2, got {n}")
    s = n.bit_length() - 1
    return BSequence(n, s, tuple(n >> (s - i + 1) for i in range(s + 1)))


def b_residues(n: int, p: int) -> List[int]:
    """b_0 .. b_s modulo p through the doubling recurrence, without forming the b_i."""
    residues = [0]
    for digit in bin(n)[2:]:
        residues.append((2 * residues[-1] + (digit == "1")) % p)
    return residues[:-1]


@dataclass
class BrylawskiMatrix:
    primes: Tuple[int, ...]
    n: int
    b: BSequence
    labels: Tuple[str, ...]
    columns: Tuple[Tuple[int, int, int], ...]

    @property
    def rows(self) -> List[List[int]]:
        return [[column[r] for column in self.columns] for r in range(3)]

    def column(self, label: str) -> Tuple[int, int, int]:
        return self.columns[self.labels.index(label)]

    def to_dict(self) -> Dict[str, Any]:
        return {"primes": list(self.primes), "n": str(self.n), "s": self.b.s, "labels": list(self.labels),
                "rows": [[str(entry) for entry in row] for row in self.rows]}


def brylawski_matrix(primes: Sequence[int]) -> BrylawskiMatrix:
    """
    The 3 x (2s+6) matrix N_n for n = prod(primes) + 1.

    Raises:
        SystemDomainError: If the set is empty or repeats a prime
    """
    n = prime_set_product(primes) + 1
    b = b_sequence(n)
    labels = list(BASE_COLUMNS)
    columns = list(BASE_COLUMNS.values())
    for i in range(1, b.s + 1):
        labels += [f"w{i}", f"u{i}"]
        columns += [(1, 2, b.values[i]), (0, 1, b.values[i])]
    return BrylawskiMatrix(tuple(primes), n, b, tuple(labels), tuple(columns))


@dataclass
class GBReport:
    primes: Tuple[int, ...]
    n: int
    s: int
    verdict: bool
    witness: Optional[Dict[str, int]] = None
    second_pair_is_one: bool = True

    def to_dict(self) -> Dict[str, Any]:
        return {"primes": list(self.primes), "n": str(self.n), "s": self.s, "verdict": self.verdict,
                "witness": self.witness, "note": EXEMPT_NOTE, "b2_minus_b1_is_one": self.second_pair_is_one}


def _first_violation(residues: List[int], p: int) -> Optional[Tuple[int, int]]:
    earlier: Dict[int, List[int]] = {}
    for j, residue in enumerate(residues):
        best = None
        for target in {residue, (residue - 1) % p, (residue + 1) % p}:
            for i in earlier.get(target, ()):
                if (i, j) in EXEMPT_PAIRS:
                    continue
                if best is None or i < best:
                    best = i
                break
        if best is not None:
            return best, j
        earlier.setdefault(residue, []).append(j)
    return None


def is_gordon_brylawski(primes: Sequence[int]) -> GBReport:
    """
    Check the Gordon-Brylawski predicate, stopping at the first failing prime.

    The witness is the first violating pair by increasing j, then i.
    """
    n = prime_set_product(primes) + 1
    s = n.bit_length() - 1
    second_is_one = s < 2 or (n >> (s - 1)) - (n >> s) == 1
    for p in primes:
        residues = b_residues(n, p)
        violation = _first_violation(residues, p)
        if violation is not None:
            i, j = violation
            witness = {"i": i, "j": j, "prime": p, "residue": (residues[j] - residues[i]) % p}
            return GBReport(tuple(primes), n, s, False, witness, second_is_one)
    return GBReport(tuple(primes), n, s, True, None, second_is_one)


def is_gordon_brylawski_naive(primes: Sequence[int]) -> bool:
    """Direct re-implementation on the full b values."""
    n = prime_set_product(primes) + 1
    values = b_sequence(n).values
    for p in primes:
        for j in range(len(values)):
            for i in range(j):
                if (i, j) in EXEMPT_PAIRS:
                    continue
                if (values[j] - values[i]) % p in (0, 1, p - 1):
                    return False
    return True


@dataclass
class GBSearchResult:
    examined: int
    truncated: bool
    found: List[GBReport] = field(default_factory=list)


def gb_search(
    size: int,
    below: Optional[int] = None,
    consecutive_from: Optional[int] = None,
    windows: int = 1,
    limit: int = DEFAULT_SEARCH_LIMIT,
    threads: int = 1,
) -> GBSearchResult:
    """
    Scan candidate prime sets and keep the Gordon-Brylawski ones.

    Candidates are either every size-subset of the primes below a bound (in
    lexicographic order) or successive windows of consecutive primes starting
    at a given number. At most limit candidates are examined.
    """
    if size < 1:
        raise MalformedInputError(f"set size must be positive, got {size}")
    if (below is None) == (consecutive_from is None):
        raise MalformedInputError("give exactly one candidate source: a bound or a consecutive start")
    if below is not None:
        pool = list(primerange(2, below))
        candidates = list(itertools.islice(itertools.combinations(pool, size), limit + 1))
    else:
        window_count = min(windows, limit + 1)
        run = consecutive_primes(consecutive_from, window_count + size - 1)
        candidates = [tuple(run[start:start + size]) for start in range(window_count)]
    truncated = len(candidates) > limit
    candidates = candidates[:limit]
    reports = parallel_map(is_gordon_brylawski, candidates, threads=threads, description="gb search")
    return GBSearchResult(len(candidates), truncated, [report for report in reports if report.verdict])


@dataclass
class RigidityReport:
    primes: Tuple[int, ...]
    p: int
    n: int
    circuits: List[Dict[str, Any]]
    minors: List[Dict[str, Any]]
    final_minor: Dict[str, Any]
    uniform_restriction: bool

    @property
    def passed(self) -> bool:
        return (all(check["ok"] for check in self.circuits) and all(check["ok"] for check in self.minors)
                and self.final_minor["ok"] and self.uniform_restriction)

    def to_dict(self) -> Dict[str, Any]:
        return {"primes": list(self.primes), "p": self.p, "n": str(self.n), "passed": self.passed,
                "circuits": self.circuits, "minors": self.minors, "final_minor": self.final_minor,
                "uniform_restriction": self.uniform_restriction}


def _det_of(matrix: BrylawskiMatrix, labels: Sequence[str]) -> int:
    columns = [matrix.column(label) for label in labels]
    return determinant([[column[r] for column in columns] for r in range(3)])


def verify_brylawski_rigidity(primes: Sequence[int], p: int) -> RigidityReport:
    """
    Over GF(p), check every circuit and minor identity the rigidity argument uses.

    When 2 is in the set n is odd, 2 b_s - 1 = n - 2, and over GF(2) the
    columns w1 and v6 coincide; those checks are reported as failures with
    n_odd set rather than asserted.

    Raises:
        PrimeNotInSetError: If p is not a member of primes
    """
    if p not in primes:
        raise PrimeNotInSetError(f"{p} is not in {list(primes)}", p=p)
    matrix = brylawski_matrix(primes)
    b, s = matrix.b.values, matrix.b.s
    space = Subspace.from_rows(matrix.labels, gf_construct(p, 1), matrix.rows)

    wanted = [("v1", "v2", "v5"), ("v3", "v4", "v5"), ("v2", "v6", "w1"), ("v5", "u1", "w1")]
    wanted += [("v2", "v3", f"u{i}") for i in range(1, s + 1)]
    wanted += [("v5", f"w{i}", f"u{i}") for i in range(1, s + 1)]
    wanted += [("v3", "w1", f"w{i}") for i in range(2, s + 1)]
    circuit_checks = [{"set": list(labels), "ok": is_circuit(space, labels)} for labels in wanted]

    minor_checks = []
    for i in range(2, s + 1):
        doubled = b[i] == 2 * b[i - 1]
        first = _det_of(matrix, ("v1", f"u{i - 1}", f"w{i}"))
        second = _det_of(matrix, ("v6", f"u{i - 1}", f"w{i}"))
        exact = first == b[i] - 2 * b[i - 1] and second == b[i] - 2 * b[i - 1] - 1
        vanishing = (first % p == 0, second % p == 0)
        ok = exact and vanishing == ((True, False) if doubled else (False, True))
        minor_checks.append({"i": i, "branch": "2b" if doubled else "2b+1", "det_v1": first, "det_v6": second,
                             "ok": ok})

    final = _det_of(matrix, ("v1", "w1", f"u{s}"))
    n_odd = matrix.n % 2 == 1
    final_minor = {
        "value": str(final),
        "expected": str(2 * b[s] - 1),
        "equals_n_minus_1": final == matrix.n - 1,
        "n_odd": n_odd,
        "ok": final == 2 * b[s] - 1 and final % p == 0,
    }

    rational = Subspace.from_rows(matrix.labels, RATIONALS, matrix.rows)
    uniform = rational.dim == 3 and is_circuit(rational, ("v1", "v2", "v3", "v4"))
    report = RigidityReport(tuple(primes), p, matrix.n, circuit_checks, minor_checks, final_minor, uniform)
    logger.info("rigidity over GF(%d) for %s: %s", p, list(primes), "pass" if report.passed else "fail")
    return report


class GordonBrylawskiService:
    """Prime-set searches under the limits and thread count of one Settings."""

    def __init__(self, settings: Settings):
        self.settings = settings

    def search(
        self,
        size: int,
        below: Optional[int] = None,
        consecutive_from: Optional[int] = None,
        windows: int = 1,
        limit: Optional[int] = None,
    ) -> GBSearchResult:
        result = gb_search(size, below=below, consecutive_from=consecutive_from, windows=windows,
                           limit=limit or self.settings.search_limit, threads=self.settings.threads)
        logger.info("gb search examined %d candidates, found %d", result.examined, len(result.found))
        return result
