#!/usr/bin/env python3
"""
Reproduce the library's computational claims in one batch run.

Each claim is an independent check (Gordon-Brylawski windows, Brylawski
rigidity, phi_n closed forms, bad-set certificates, skew witnesses, flock
axioms and stretching, densities). Checks run on a thread pool and the outcome of every
one is collected into a single JSON summary.

Usage:
    python scripts/reproduce_examples.py --out files/reproduction_summary.json
    python scripts/reproduce_examples.py --only gb-80 --only density

Environment Variables:
    MATROID_CHARSET_THREADS (optional, worker count when --threads is omitted)
"""
import argparse
import itertools
import logging
import sys
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

from tqdm import tqdm

current_directory = Path(__file__).resolve().parent
sys.path.append(str(current_directory.parent))

from services.brylawski_service import is_gordon_brylawski, verify_brylawski_rigidity  # noqa: E402
from services.density_service import empirical_density, greedy_density_set  # noqa: E402
from services.equation_solver_service import (  # noqa: E402
    bad_set_certificate,
    phi_closed_forms,
    primes_below,
    propagate_symbolic,
    search_solutions,
)
from services.equation_system import build_finite, build_phi_n  # noqa: E402
from services.finite_field import gf_construct  # noqa: E402
from services.flock_service import (  # noqa: E402
    Window,
    check_axioms,
    check_stretch_support,
    stretch_flock,
    support_matroid,
    valuation_flock,
)
from services.linear_algebra import RationalMatrix, base_change  # noqa: E402
from services.matroid import uniform_matroid  # noqa: E402
from services.prime_service import consecutive_primes  # noqa: E402
from services.skew_witness_service import witness_finite_all, witness_root_of_unity  # noqa: E402
from utils.config import get_settings  # noqa: E402
from utils.errors import RootOfUnityObstruction  # noqa: E402
from utils.utils import save_json_file  # noqa: E402

logger = logging.getLogger(__name__)

Check = Callable[[], Dict[str, Any]]


class ExampleReproducer:
    """
    Runs the registered checks and gathers a summary.

    Attributes:
        threads (int): Worker threads for running checks side by side
        checks (Dict[str, Check]): Check name to zero-argument callable
    """

    GB_START = 12811987
    GB_COUNT = 80
    CLOSED_FORM_MAX_N = 40
    BAD_SET_MAX_N = 25
    BAD_SET_PRIME_BOUND = 100
    DENSITY_CUTOFF = 1_000_000
    DENSITY_TOLERANCE = 0.02
    GREEDY_ALPHAS = tuple(i / 10 for i in range(1, 10))
    GREEDY_EPSILONS = (0.02, 0.05, 0.1)

    def __init__(self, threads: int = 1):
        self.threads = threads
        self.checks: Dict[str, Check] = {
            "gb-80": self.check_gb_window,
            "brylawski": self.check_rigidity,
            "closed-forms": self.check_closed_forms,
            "bad-sets": self.check_bad_sets,
            "evidence": self.check_characteristic_evidence,
            "witnesses": self.check_witnesses,
            "flocks": self.check_flocks,
            "stretching": self.check_stretching,
            "density": self.check_density,
        }

    def check_gb_window(self) -> Dict[str, Any]:
        primes = consecutive_primes(self.GB_START, self.GB_COUNT)
        report = is_gordon_brylawski(primes)
        return {"ok": report.verdict, "first": primes[0], "last": primes[-1], "witness": report.witness}

    def check_rigidity(self) -> Dict[str, Any]:
        results = {}
        for primes in ((5,), (7,), (5, 7), (2,)):
            for p in primes:
                report = verify_brylawski_rigidity(primes, p)
                results[f"{list(primes)} over GF({p})"] = {
                    "passed": report.passed,
                    "n_odd": report.final_minor["n_odd"],
                }
        # {2} makes n odd, where the final minor is n - 2 and cannot vanish
        ok = all(entry["passed"] != entry["n_odd"] for entry in results.values())
        return {"ok": ok, "results": results}

    def check_closed_forms(self) -> Dict[str, Any]:
        failures = []
        for n in range(2, self.CLOSED_FORM_MAX_N + 1):
            values = propagate_symbolic(build_phi_n(n))
            for name, expected in phi_closed_forms(n).items():
                if values[name] != expected:
                    failures.append({"n": n, "variable": name, "got": str(values[name])})
        return {"ok": not failures, "failures": failures}

    def check_bad_sets(self) -> Dict[str, Any]:
        primes = primes_below(self.BAD_SET_PRIME_BOUND)
        failing = []
        for n in range(2, self.BAD_SET_MAX_N + 1):
            report = bad_set_certificate(build_phi_n(n), primes)
            if not report.verdict:
                failing.append(n)
        return {"ok": not failing, "failing_n": failing}

    def check_characteristic_evidence(self) -> Dict[str, Any]:
        system = build_finite([3])
        found = search_solutions(system, gf_construct(3, 6), threads=self.threads)
        none_found = {}
        for m in (1, 2, 3):
            field = gf_construct(5, m)
            none_found[field.label()] = len(search_solutions(system, field, threads=self.threads).solutions)
        ok = len(found.solutions) >= 1 and not any(none_found.values())
        return {"ok": ok, "GF(3^6)": len(found.solutions), "characteristic 5": none_found}

    def check_witnesses(self) -> Dict[str, Any]:
        accepted = {"finite_all {3} p=2": witness_finite_all([3], 2).report.accepted}
        for p in (2, 5, 11):
            accepted[f"root_of_unity n=3 p={p}"] = witness_root_of_unity(3, p).report.accepted
        obstructed = {}
        for p in (7, 13):
            try:
                witness_root_of_unity(3, p)
                obstructed[p] = False
            except RootOfUnityObstruction:
                obstructed[p] = True
        return {"ok": all(accepted.values()) and all(obstructed.values()), "accepted": accepted,
                "obstructed": obstructed}

    def check_flocks(self) -> Dict[str, Any]:
        violations = {}
        for rows in ([[1, 1]], [[1, 0, 1, 1], [0, 1, 1, 2]]):
            matrix = RationalMatrix.from_rows(rows)
            for p in (2, 3, 5):
                flock = valuation_flock(matrix, p)
                report = check_axioms(flock, Window.box(flock.ground, 2))
                violations[f"{rows} p={p}"] = len(report.violations)
        four = valuation_flock(RationalMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]]), 2)
        support = support_matroid(four, Window.box(four.ground, 1)).matroid
        uniform = support.bases == uniform_matroid(2, 4, four.ground).bases
        return {"ok": not any(violations.values()) and uniform, "violations": violations, "support_is_U24": uniform}

    def check_stretching(self) -> Dict[str, Any]:
        results = {}
        for rows in ([[1, 1]], [[1, 0, 1], [0, 1, 1]]):
            for p in (2, 3):
                inner = valuation_flock(RationalMatrix.from_rows(rows), p)
                for m in (2, 3):
                    stretched = stretch_flock(inner, m)
                    report = check_axioms(stretched, Window.box(inner.ground, m))
                    restores = all(
                        stretched.at(tuple(m * a for a in alpha)) == base_change(inner.at(alpha), stretched.field)
                        for alpha in itertools.product((-1, 0, 1), repeat=len(inner.ground))
                    )
                    failures = check_stretch_support(inner, stretched, Window.box(inner.ground, m))
                    results[f"{rows} p={p} m={m}"] = {
                        "violations": len(report.violations),
                        "restores_inner": restores,
                        "support_failures": len(failures),
                    }
        ok = all(not r["violations"] and r["restores_inner"] and not r["support_failures"] for r in results.values())
        return {"ok": ok, "results": results}

    def check_density(self) -> Dict[str, Any]:
        differences = {}
        for moduli in ((3,), (3, 5)):
            report = empirical_density(moduli, self.DENSITY_CUTOFF)
            differences[str(list(moduli))] = abs(report.empirical - float(report.theoretical))
        greedy_misses = []
        for alpha in self.GREEDY_ALPHAS:
            for epsilon in self.GREEDY_EPSILONS:
                if alpha - epsilon <= 1e-12:
                    continue
                result = greedy_density_set(alpha, epsilon)
                if not result.error < result.epsilon:
                    greedy_misses.append([alpha, epsilon])
        ok = all(diff < self.DENSITY_TOLERANCE for diff in differences.values()) and not greedy_misses
        return {"ok": ok, "differences": differences, "greedy_misses": greedy_misses}

    def _run_one(self, name: str) -> Tuple[str, Dict[str, Any]]:
        started = time.perf_counter()
        try:
            outcome = self.checks[name]()
        except Exception as check_error:
            logger.error("check %s raised: %s", name, check_error)
            outcome = {"ok": False, "error": str(check_error)}
        outcome["seconds"] = round(time.perf_counter() - started, 3)
        return name, outcome

    def run(self, names: Optional[List[str]] = None) -> Dict[str, Any]:
        selected = names or list(self.checks)
        unknown = [name for name in selected if name not in self.checks]
        if unknown:
            raise ValueError(f"Unknown checks {unknown}; available: {', '.join(self.checks)}")

        results: Dict[str, Dict[str, Any]] = {}
        with ThreadPoolExecutor(max_workers=self.threads) as executor:
            future_to_name = {executor.submit(self._run_one, name): name for name in selected}
            with tqdm(total=len(selected), desc="Reproducing", disable=None) as progress_bar:
                for completed_future in as_completed(future_to_name):
                    name, outcome = completed_future.result()
                    results[name] = outcome
                    progress_bar.set_postfix_str(f"{name}: {'ok' if outcome['ok'] else 'FAILED'}")
                    progress_bar.update(1)
        ordered = {name: results[name] for name in selected}
        return {"all_ok": all(outcome["ok"] for outcome in ordered.values()), "checks": ordered}


def main():
    """
    Entry point: parse arguments, run the checks, write the summary.
    """
    argument_parser = argparse.ArgumentParser(
        description="Reproduce the computational claims of the library in one batch",
        epilog="Example: python scripts/reproduce_examples.py --only flocks --out summary.json",
    )
    argument_parser.add_argument("--only", action="append", help="Run only this check (repeatable)")
    argument_parser.add_argument("--threads", type=int, help="Worker threads")
    argument_parser.add_argument(
        "--out",
        default="files/reproduction_summary.json",
        help="Where to write the JSON summary (default: files/reproduction_summary.json)",
    )
    parsed_arguments = argument_parser.parse_args()

    try:
        settings = get_settings()
        logging.basicConfig(stream=sys.stderr, level=settings.log_level)
        reproducer = ExampleReproducer(threads=parsed_arguments.threads or settings.threads)
        summary = reproducer.run(parsed_arguments.only)
    except ValueError as execution_error:
        logger.error("Error during execution: %s", execution_error)
        sys.exit(1)

    if not save_json_file(summary, Path(parsed_arguments.out)):
        sys.exit(1)
    for name, outcome in summary["checks"].items():
        print(f"{'✓' if outcome['ok'] else '✗'} {name:<12} {outcome['seconds']:.2f}s")
    if not summary["all_ok"]:
        sys.exit(1)


if __name__ == "__main__":
    main()
