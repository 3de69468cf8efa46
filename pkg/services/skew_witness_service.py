# skew_witness_service.py
"""
Explicit solutions of equation systems in the skew polynomial ring GF(p^m)[F].

Two constructions are provided: the finite_all system solved with y1 = F and
a twisted u1, and the root_of_unity system solved with y1 a primitive root of
unity and z1 = F. When the second construction is impossible the obstruction
is raised as an error carrying its explanation.
"""
import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, Iterable, Optional

from sympy import isprime, n_order

from services.equation_solver_service import Assignment, VerificationReport, evaluate_system, verify_assignment
from services.equation_system import (
    EquationSystem,
    build_finite_all,
    build_root_of_unity,
    root_of_unity_order,
)
from services.finite_field import FieldDescriptor, FieldElement, gf_construct, primitive_root_of_unity
from services.prime_service import prime_set_product
from services.skew_polynomial import SkewPolynomial
from utils.errors import (
    ForbiddenSubfieldError,
    NotCoprimeError,
    NotPrimeError,
    RootOfUnityObstruction,
    SystemDomainError,
)

logger = logging.getLogger(__name__)


@dataclass
class Witness:
    system: EquationSystem
    field: FieldDescriptor
    assignment: Assignment
    report: VerificationReport
    parameters: Dict[str, Any]


def default_alpha_degree(n: int) -> int:
    """Smallest extension degree D >= 2 whose generator avoids GF(p^(n-1)) and GF(p^(n-2))."""
    degree = 2
    while (n - 1) % degree == 0 or (n - 2) % degree == 0:
        degree += 1
    return degree


def witness_finite_all(
    C: Iterable[int],
    p: int,
    alpha: Optional[FieldElement] = None,
    degree: Optional[int] = None,
) -> Witness:
    """
    Solve the finite_all system for C in GF(p^m)[F] with p outside C.

    Args:
        C: Finite prime set with product n >= 3
        p: Characteristic, not in C
        alpha: Element outside GF(p^(n-1)) and GF(p^(n-2)); defaults to the generator t
        degree: Extension degree used when alpha is not given

    Raises:
        SystemDomainError: If n < 3 or p belongs to C
        ForbiddenSubfieldError: If alpha lies in GF(p^(n-1)) or GF(p^(n-2))
    """
    primes = list(C)
    system = build_finite_all(primes)
    n = prime_set_product(primes)
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime", p=p)
    if p in primes:
        raise SystemDomainError(f"p = {p} belongs to C; the skew witness is for characteristics outside C", p=p)

    if alpha is None:
        field = gf_construct(p, degree if degree is not None else default_alpha_degree(n))
        alpha = field.generator()
    else:
        field = alpha.field
    if field.p != p:
        raise SystemDomainError(f"alpha lives in characteristic {field.p}, expected {p}")
    for k in (n - 1, n - 2):
        if alpha.is_in_subfield(k):
            raise ForbiddenSubfieldError(
                f"alpha = {alpha} lies in GF({p}^{k}), so alpha^(p^{k}) - alpha has no inverse", k=k
            )

    beta = (alpha.frobenius(n - 1) - alpha).inverse()
    gamma = (alpha.frobenius(n - 2) - alpha).inverse()
    frob = SkewPolynomial.frobenius_generator(field)
    u1 = SkewPolynomial.monomial(beta, n - 1) + SkewPolynomial.monomial(gamma, n - 2)
    u2 = SkewPolynomial.constant(field, alpha * n)

    zero = SkewPolynomial.constant(field, 0)
    one = SkewPolynomial.constant(field, 1)
    assignment = evaluate_system(system, {"y1": frob, "u1": u1, "u2": u2}, zero, one)
    report = verify_assignment(system, assignment)
    logger.info("finite_all witness over %s: %s", field.label(), "accept" if report.accepted else "reject")
    return Witness(system, field, assignment, report,
                   {"n": n, "p": p, "alpha": str(alpha), "beta": str(beta), "gamma": str(gamma)})


def witness_root_of_unity(n: int, p: int) -> Witness:
    """
    Solve the root_of_unity system with y1 a primitive m-th root and z1 = F.

    Raises:
        NotCoprimeError: If p divides n or the root order m
        RootOfUnityObstruction: If p = 1 mod n, where y_k lies in GF(p) and z2 = z3
    """
    if not isprime(p):
        raise NotPrimeError(f"{p} is not prime", p=p)
    system = build_root_of_unity(n)
    if n % p == 0:
        raise NotCoprimeError(f"p = {p} divides n = {n}", p=p, n=n)
    if p % n == 1:
        raise RootOfUnityObstruction(
            f"x^{n}-1 splits in GF({p}): every n-th root of unity lies in GF({p}), so y_k commutes with F "
            f"and z2 = z3",
            n=n, p=p,
        )
    m = root_of_unity_order(n)
    if gcd(m, p) != 1:
        raise NotCoprimeError(f"p = {p} divides the root order m = {m}", p=p, m=m)
    k = m // n
    degree = int(n_order(p, m))
    field = gf_construct(p, degree)
    root = primitive_root_of_unity(field, m)

    zero = SkewPolynomial.constant(field, 0)
    one = SkewPolynomial.constant(field, 1)
    free = {"y1": SkewPolynomial.constant(field, root), "z1": SkewPolynomial.frobenius_generator(field)}
    assignment = evaluate_system(system, free, zero, one)
    report = verify_assignment(system, assignment)
    logger.info("root_of_unity witness over %s: %s", field.label(), "accept" if report.accepted else "reject")
    return Witness(system, field, assignment, report, {"n": n, "p": p, "m": m, "k": k, "y1": str(root)})
