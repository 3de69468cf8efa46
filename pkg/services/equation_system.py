# equation_system.py
"""
Equation systems over the variables x0, x1, ... with sum and product
equations, forced constants x0 = 0 and x1 = 1, and a global requirement that
all variables take distinct values.

An equation whose target already has a definition (an earlier equation or a
constant) is a constraint: it is checked by the verifier but never used to
propagate values.
"""
import logging
from dataclasses import dataclass
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from services.prime_service import prime_set_product
from utils.errors import MalformedInputError, SystemDomainError

logger = logging.getLogger(__name__)

ZERO = "x0"
ONE = "x1"
CONSTANTS = (ZERO, ONE)

SUM = "sum"
PRODUCT = "product"

FAMILIES = ("phi_n", "finite", "cofinite", "cofinite_cofinite", "finite_all", "root_of_unity")

# Root-of-unity systems use the least multiple of n above this bound
ROOT_OF_UNITY_FLOOR = 6


@dataclass(frozen=True)
class Equation:
    kind: str
    target: str
    left: str
    right: str

    def __post_init__(self):
        if self.kind not in (SUM, PRODUCT):
            raise MalformedInputError(f"equation kind must be 'sum' or 'product', got {self.kind!r}")

    def __str__(self) -> str:
        operator = "+" if self.kind == SUM else "*"
        return f"{self.target} = {self.left} {operator} {self.right}"


@dataclass(frozen=True)
class Finding:
    equation_index: Optional[int]
    message: str


@dataclass(frozen=True)
class EquationSystem:
    variables: Tuple[str, ...]
    equations: Tuple[Equation, ...]
    family: Optional[str] = None

    def __post_init__(self):
        if self.variables[:2] != CONSTANTS:
            raise MalformedInputError("the first two variables must be x0 and x1")

    def constraint_indices(self) -> List[int]:
        """Equations whose target is a constant or was defined by an earlier equation."""
        defined = set(CONSTANTS)
        constraints = []
        for index, equation in enumerate(self.equations):
            if equation.target in defined:
                constraints.append(index)
            else:
                defined.add(equation.target)
        return constraints

    def free_variables(self) -> List[str]:
        """Variables never used as a definition target."""
        targets = {equation.target for equation in self.equations}
        return [name for name in self.variables if name not in CONSTANTS and name not in targets]


def validate_system(S: EquationSystem) -> List[Finding]:
    """Every side-condition violation with its equation index; empty means conformant."""
    findings: List[Finding] = []
    names = set(S.variables)
    if len(names) != len(S.variables):
        findings.append(Finding(None, "variable names repeat"))
    for index, eq in enumerate(S.equations):
        unknown = [name for name in (eq.target, eq.left, eq.right) if name not in names]
        if unknown:
            findings.append(Finding(index, f"unknown variables {unknown}"))
            continue
        if eq.kind == SUM:
            if ZERO in (eq.left, eq.right):
                findings.append(Finding(index, "sum operand is constant x0"))
        else:
            if eq.target in CONSTANTS:
                findings.append(Finding(index, f"product target is constant {eq.target}"))
            for operand in (eq.left, eq.right):
                if operand in CONSTANTS:
                    findings.append(Finding(index, f"product operand is constant {operand}"))
        if eq.target == eq.left:
            findings.append(Finding(index, "target equals the left operand"))
        if eq.target == eq.right:
            findings.append(Finding(index, "target equals the right operand"))
    return findings


def _phi_n(n: int) -> Tuple[List[str], List[Equation]]:
    variables = [ZERO, ONE]
    variables += [f"y{i}" for i in range(1, n + 2)]
    variables += [f"z{i}" for i in range(1, n)]
    variables += [f"w{j}" for j in range(1, 2 * n - 2)]
    variables.append("w")

    equations = [Equation(PRODUCT, f"y{i}", f"y{i - 1}", "y1") for i in range(2, n + 2)]
    equations.append(Equation(SUM, "z1", "y1", ONE))
    equations += [Equation(PRODUCT, f"z{i}", f"z{i - 1}", "y1") for i in range(2, n)]
    equations.append(Equation(SUM, "w1", "y3", "y1"))
    for j in range(2, 2 * n - 2):
        if j % 2 == 0:
            equations.append(Equation(SUM, f"w{j}", f"w{j - 1}", f"z{j // 2}"))
        else:
            equations.append(Equation(PRODUCT, f"w{j}", f"w{j - 1}", "y1"))
    equations.append(Equation(SUM, "w", f"w{2 * n - 3}", f"z{n - 1}"))
    return variables, equations


def build_phi_n(n: int) -> EquationSystem:
    """
    Raises:
        SystemDomainError: If n < 2
    """
    if n < 2:
        raise SystemDomainError(f"phi_n needs n >= 2, got {n}", n=n)
    variables, equations = _phi_n(n)
    return EquationSystem(tuple(variables), tuple(equations), family="phi_n")


def _phi_for_product(primes: Iterable[int], family: str) -> Tuple[int, List[str], List[Equation]]:
    n = prime_set_product(primes)
    if n < 3:
        raise SystemDomainError(f"{family} needs a prime product of at least 3, got {n} (y_(n-2) is undefined)",
                                n=n)
    variables, equations = _phi_n(n)
    return n, variables, equations


def build_finite(C: Iterable[int]) -> EquationSystem:
    n, variables, equations = _phi_for_product(C, "finite")
    equations.append(Equation(SUM, f"y{n + 1}", "w", f"y{n - 2}"))
    return EquationSystem(tuple(variables), tuple(equations), family="finite")


def build_cofinite(complement: Iterable[int]) -> EquationSystem:
    """System for the cofinite set given by the finitely many excluded primes."""
    n, variables, equations = _phi_for_product(complement, "cofinite")
    variables.append("v")
    equations.append(Equation(SUM, "v", "w", f"y{n - 2}"))
    return EquationSystem(tuple(variables), tuple(equations), family="cofinite")


def build_cofinite_cofinite(complement: Iterable[int]) -> EquationSystem:
    base = build_cofinite(complement)
    variables = base.variables + ("u1", "u2", "u3")
    equations = base.equations + (
        Equation(PRODUCT, "u2", "u1", "u1"),
        Equation(PRODUCT, "u3", "u2", "u1"),
        Equation(SUM, ONE, "u3", "u1"),
    )
    return EquationSystem(variables, equations, family="cofinite_cofinite")


def build_finite_all(C: Iterable[int]) -> EquationSystem:
    n, variables, equations = _phi_for_product(C, "finite_all")
    variables += [f"u{i}" for i in range(1, 9)]
    equations += [
        Equation(SUM, "u3", "u2", ONE),
        Equation(PRODUCT, "u4", "u1", "u3"),
        Equation(PRODUCT, "u5", "u2", "u1"),
        Equation(SUM, "u6", "u5", "w"),
        Equation(SUM, "u7", "u6", f"y{n - 2}"),
        Equation(SUM, "u8", "u4", f"y{n + 1}"),
        Equation(SUM, "u8", "u7", "u1"),
    ]
    return EquationSystem(tuple(variables), tuple(equations), family="finite_all")


def root_of_unity_order(n: int) -> int:
    """Least multiple of n exceeding the floor."""
    return n * (ROOT_OF_UNITY_FLOOR // n + 1)


def build_root_of_unity(n: int) -> EquationSystem:
    if n < 2:
        raise SystemDomainError(f"root_of_unity needs n >= 2, got {n}", n=n)
    m = root_of_unity_order(n)
    k = m // n
    variables = [ZERO, ONE] + [f"y{i}" for i in range(1, m)] + ["z1", "z2", "z3"]
    equations = [Equation(PRODUCT, f"y{i}", f"y{i - 1}", "y1") for i in range(2, m)]
    equations += [
        Equation(PRODUCT, ONE, f"y{m - 1}", "y1"),
        Equation(PRODUCT, "z2", f"y{k}", "z1"),
        Equation(PRODUCT, "z3", "z1", f"y{k}"),
    ]
    return EquationSystem(tuple(variables), tuple(equations), family="root_of_unity")


def build_family(family: str, n: Optional[int] = None, primes: Sequence[int] = ()) -> EquationSystem:
    """
    Dispatch to a family builder.

    Args:
        family: One of FAMILIES
        n: Parameter for phi_n and root_of_unity
        primes: Prime set for finite and finite_all, excluded primes for the cofinite families
    """
    if family in ("phi_n", "root_of_unity"):
        if n is None:
            raise MalformedInputError(f"family {family} needs --n")
        return build_phi_n(n) if family == "phi_n" else build_root_of_unity(n)
    builders = {
        "finite": build_finite,
        "cofinite": build_cofinite,
        "cofinite_cofinite": build_cofinite_cofinite,
        "finite_all": build_finite_all,
    }
    if family not in builders:
        raise MalformedInputError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if not primes:
        raise MalformedInputError(f"family {family} needs a prime set")
    return builders[family](list(primes))


def system_summary(S: EquationSystem) -> Dict[str, object]:
    return {
        "family": S.family,
        "variables": len(S.variables),
        "equations": len(S.equations),
        "constraints": [str(S.equations[index]) for index in S.constraint_indices()],
        "free": S.free_variables(),
    }
