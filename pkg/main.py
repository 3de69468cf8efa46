# main.py
"""
Command line entry point: one verb per module, JSON on standard output.

Examples:
    charsets gb check --consecutive --start 12811987 --count 80
    charsets eqsys propagate --family phi_n --n 3
    charsets density theoretical --moduli 3,5
    charsets flock check --rows "1,0,1,1;0,1,1,2" --p 2 --radius 1
"""
import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from services.brylawski_service import (
    GordonBrylawskiService,
    brylawski_matrix,
    is_gordon_brylawski,
    verify_brylawski_rigidity,
)
from services.density_service import (
    density_convergence,
    empirical_density,
    fraction_text,
    greedy_density_set,
    theoretical_density,
)
from services.equation_solver_service import (
    EquationSolverService,
    bad_set_certificate,
    phi_closed_forms,
    primes_below,
    propagate_symbolic,
    verify_assignment,
)
from services.equation_system import FAMILIES, build_family, system_summary, validate_system
from services.finite_field import gf_construct
from services.flock_service import (
    Flock,
    FlockService,
    Window,
    dual_flock,
    flock_at,
    stretch_flock,
    valuation_flock,
)
from services.linear_algebra import RATIONALS, RationalMatrix, Subspace
from services.matroid import (
    circuits,
    matroid_direct_sum,
    matroid_dual,
    matroid_from_subspace,
    matroid_minor,
    relabel_matroid,
)
from services.prime_service import consecutive_primes, sieve_primes
from services.serialization import (
    decode_assignment,
    decode_flock,
    decode_matroid,
    decode_rational_matrix,
    decode_subspace,
    decode_system,
    encode_assignment,
    encode_flock,
    encode_matroid,
    encode_subspace,
    encode_system,
    encode_window,
    with_schema,
)
from services.skew_witness_service import witness_finite_all, witness_root_of_unity
from utils.config import LF1_PRIME_SAMPLE_SIZE, SCHEMA_VERSION, Settings, get_settings
from utils.errors import CharsetError, MalformedInputError
from utils.utils import load_json_file, parse_int_list, parse_label_list, render_pretty, save_json_file

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_VIOLATION = "violation-report"
STATUS_ERROR = "error"

EXIT_OK = 0
EXIT_DOMAIN = 1
EXIT_MALFORMED = 2

# Sieve output lists the primes themselves only up to this many
SIEVE_LISTING_LIMIT = 1000

Handler = Callable[[argparse.Namespace, Settings], Tuple[Dict[str, Any], bool]]


class CliArgumentParser(argparse.ArgumentParser):
    """Argument errors become MalformedInputError instead of exiting the process."""

    def error(self, message):
        raise MalformedInputError(f"{self.prog}: {message}")


# ----------------------------------------------------------------------------- inputs


def _primes(args: argparse.Namespace, name: str = "primes") -> List[int]:
    return parse_int_list(getattr(args, name), name)


def _parse_rows(text: str) -> List[List[str]]:
    """Rows separated by ';', entries by ','; entries may be 'a/b'."""
    rows = [[entry.strip() for entry in row.split(",")] for row in text.split(";") if row.strip()]
    if not rows:
        raise MalformedInputError(f"no rows in {text!r}")
    return rows


def _rational_matrix(args: argparse.Namespace) -> RationalMatrix:
    if getattr(args, "matrix", None):
        return decode_rational_matrix(_load_object(args.matrix))
    if getattr(args, "rows", None):
        return RationalMatrix.from_rows(_parse_rows(args.rows), parse_label_list(args.ground) or None)
    raise MalformedInputError("give a matrix with --matrix FILE or --rows TEXT")


def _load_object(path: str, key: Optional[str] = None) -> Any:
    """
    Load an object written by another command.

    A result envelope written with --out is unwrapped to its payload, and when
    the payload holds the object under key (as eqsys build and eqsys witness
    do) that entry is returned.
    """
    document = load_json_file(Path(path))
    if isinstance(document, dict) and "payload" in document and "status" in document:
        if document["status"] == STATUS_ERROR:
            raise MalformedInputError(f"'{path}' holds a failed command result")
        document = document["payload"]
    if key and isinstance(document, dict) and isinstance(document.get(key), dict):
        document = document[key]
    return document


def _flock(args: argparse.Namespace) -> Flock:
    if args.flock:
        return decode_flock(_load_object(args.flock))
    if args.p is None:
        raise MalformedInputError("a valuation flock needs --p")
    return valuation_flock(_rational_matrix(args), args.p)


def _window(args: argparse.Namespace, f: Flock, settings: Settings) -> Window:
    if args.lower is not None or args.upper is not None:
        if args.lower is None or args.upper is None:
            raise MalformedInputError("--lower and --upper go together")
        return Window.from_bounds(f.ground, parse_int_list(args.lower, "lower"), parse_int_list(args.upper, "upper"))
    if args.radius is not None:
        return Window.box(f.ground, args.radius)
    return FlockService(settings).window_for(f)


def _system(args: argparse.Namespace):
    if args.system:
        return decode_system(_load_object(args.system, "system"))
    if not args.family:
        raise MalformedInputError("give --system FILE or --family NAME")
    return build_family(args.family, n=args.n, primes=_primes(args))


def _matroid(path: str):
    return decode_matroid(_load_object(path, "matroid"))


# ----------------------------------------------------------------------------- gb / brylawski


def gb_check(args, settings):
    if args.consecutive:
        if args.start is None or args.count is None:
            raise MalformedInputError("--consecutive needs --start and --count")
        primes = consecutive_primes(args.start, args.count)
    else:
        primes = _primes(args)
    report = is_gordon_brylawski(primes)
    payload = report.to_dict()
    if args.consecutive:
        payload["consecutive_confirmed"] = True
        payload["first"], payload["last"], payload["count"] = primes[0], primes[-1], len(primes)
        del payload["primes"]
    return payload, report.verdict


def gb_search_command(args, settings):
    result = GordonBrylawskiService(settings).search(args.size, below=args.below,
                                                     consecutive_from=args.consecutive_from, windows=args.windows,
                                                     limit=args.limit)
    return {"examined": result.examined, "truncated": result.truncated,
            "found": [report.to_dict() for report in result.found]}, True


def gb_sequence(args, settings):
    primes = _primes(args)
    sequence = brylawski_matrix(primes).b
    values = sequence.values
    law = values[0] == 0 and values[1] == 1 and all(b - 2 * a in (0, 1) for a, b in zip(values, values[1:]))
    return {"n": str(sequence.n), "s": sequence.s, "b": [str(b) for b in values], "doubling_law": law}, law


def brylawski_matrix_command(args, settings):
    return brylawski_matrix(_primes(args)).to_dict(), True


def brylawski_verify(args, settings):
    report = verify_brylawski_rigidity(_primes(args), args.p)
    return report.to_dict(), report.passed


# ----------------------------------------------------------------------------- eqsys


def eqsys_build(args, settings):
    S = _system(args)
    return {"system": with_schema(encode_system(S)), "summary": system_summary(S)}, True


def eqsys_validate(args, settings):
    findings = validate_system(_system(args))
    return {"findings": [{"equation": f.equation_index, "message": f.message} for f in findings]}, not findings


def eqsys_propagate(args, settings):
    S = _system(args)
    values = propagate_symbolic(S)
    payload: Dict[str, Any] = {"values": {name: str(value) for name, value in values.items()}}
    ok = True
    if S.family == "phi_n" and args.n is not None:
        predicted = phi_closed_forms(args.n)
        checks = {name: values[name] == expected for name, expected in predicted.items()}
        payload["closed_forms"] = {name: {"expected": str(predicted[name]), "ok": checks[name]} for name in predicted}
        ok = all(checks.values())
    return payload, ok


def eqsys_badset(args, settings):
    S = _system(args)
    primes = parse_int_list(args.check_primes, "check-primes") if args.check_primes else primes_below(args.below)
    report = bad_set_certificate(S, primes)
    return report.to_dict(include_differences=args.differences), report.verdict


def eqsys_verify(args, settings):
    S = _system(args)
    if not args.assignment:
        raise MalformedInputError("verify needs --assignment FILE")
    report = verify_assignment(S, decode_assignment(_load_object(args.assignment, "assignment")))
    return report.to_dict(), report.accepted


def eqsys_search(args, settings):
    S = _system(args)
    field = gf_construct(args.p, args.m)
    result = EquationSolverService(settings).search(S, field, limit=args.limit)
    payload = {
        "field": field.label(),
        "free_variables": result.free_variables,
        "examined": result.examined,
        "solutions": len(result.solutions),
        "first_solution": encode_assignment(result.solutions[0]) if result.solutions else None,
    }
    return payload, True


def eqsys_witness(args, settings):
    if args.kind == "finite_all":
        witness = witness_finite_all(_primes(args), args.p, degree=args.degree)
    else:
        if args.n is None:
            raise MalformedInputError("root_of_unity witness needs --n")
        witness = witness_root_of_unity(args.n, args.p)
    payload = {
        "family": witness.system.family,
        "field": witness.field.label(),
        "parameters": {key: str(value) for key, value in witness.parameters.items()},
        "report": witness.report.to_dict(),
        "assignment": encode_assignment(witness.assignment),
        "system": encode_system(witness.system),
    }
    return payload, witness.report.accepted


# ----------------------------------------------------------------------------- flock


def _subspace_payload(V: Subspace, settings: Settings) -> Dict[str, Any]:
    return {"subspace": encode_subspace(V), "bases": matroid_from_subspace(V, settings.enumeration_limit).basis_sets()}


def flock_build(args, settings):
    return with_schema(encode_flock(_flock(args))), True


def flock_at_command(args, settings):
    f = _flock(args)
    alpha = parse_int_list(args.alpha, "alpha")
    return {"alpha": alpha, **_subspace_payload(flock_at(f, alpha), settings)}, True


def flock_stretch(args, settings):
    f = _flock(args)
    field = gf_construct(f.field.p, args.field_degree) if args.field_degree else None
    return with_schema(encode_flock(stretch_flock(f, args.m, field, args.exponent))), True


def flock_dual(args, settings):
    return with_schema(encode_flock(dual_flock(_flock(args)))), True


def flock_check(args, settings):
    f = _flock(args)
    w = _window(args, f, settings)
    report = FlockService(settings).check(f, w, sample_size=args.samples)
    payload = {
        "window": encode_window(w),
        "points_checked": report.points_checked,
        "lf1_prime_subsets": [list(subset) for subset in report.subsets],
        "violation_counts": report.counts(),
        "violations": report.violations,
    }
    return payload, report.passed


def flock_support(args, settings):
    f = _flock(args)
    w = _window(args, f, settings)
    report = FlockService(settings).support(f, w)
    return {"window": encode_window(w), "matroid": encode_matroid(report.matroid), "is_matroid": report.is_matroid,
            "caveat": report.caveat}, True


# ----------------------------------------------------------------------------- matroid


def matroid_from_subspace_command(args, settings):
    if args.subspace:
        V = decode_subspace(_load_object(args.subspace, "subspace"))
    else:
        if not args.rows:
            raise MalformedInputError("give --subspace FILE or --rows TEXT")
        field = gf_construct(args.p, args.m) if args.p is not None else RATIONALS
        rows = _parse_rows(args.rows)
        V = Subspace.from_rows(parse_label_list(args.ground) or [str(i) for i in range(1, len(rows[0]) + 1)],
                               field, rows)
    return with_schema(encode_matroid(matroid_from_subspace(V, settings.enumeration_limit))), True


def matroid_dual_command(args, settings):
    return with_schema(encode_matroid(matroid_dual(_matroid(args.matroid)))), True


def matroid_minor_command(args, settings):
    M = matroid_minor(_matroid(args.matroid), parse_label_list(args.delete), parse_label_list(args.contract))
    return with_schema(encode_matroid(M)), True


def matroid_circuits_command(args, settings):
    found = circuits(_matroid(args.matroid), settings.enumeration_limit)
    return {"circuits": found}, True


def matroid_sum_command(args, settings):
    first, second = _matroid(args.matroid), _matroid(args.other)
    if args.relabel:
        first, second = relabel_matroid(first, "a"), relabel_matroid(second, "b")
    return with_schema(encode_matroid(matroid_direct_sum(first, second))), True


# ----------------------------------------------------------------------------- density


def density_sieve(args, settings):
    primes = sieve_primes(args.limit)
    payload: Dict[str, Any] = {"limit": args.limit, "count": int(len(primes))}
    if len(primes) <= SIEVE_LISTING_LIMIT:
        payload["primes"] = primes.tolist()
    return payload, True


def density_empirical(args, settings):
    return empirical_density(_primes(args, "moduli"), args.limit).to_dict(), True


def density_theoretical(args, settings):
    value = theoretical_density(_primes(args, "moduli"))
    return {"moduli": _primes(args, "moduli"), "density": fraction_text(value), "decimal": float(value)}, True


def density_greedy(args, settings):
    result = greedy_density_set(args.alpha, args.eps)
    return result.to_dict(), True


def density_convergence_command(args, settings):
    frame, monotone = density_convergence(_primes(args, "moduli"), parse_int_list(args.cutoffs, "cutoffs"))
    return {"rows": frame.to_dict(orient="records"), "monotone_shrinking": monotone}, True


# ----------------------------------------------------------------------------- parser


def _global_options() -> argparse.ArgumentParser:
    options = CliArgumentParser(add_help=False)
    options.add_argument("--out", help="Write the JSON result to this file instead of standard output")
    options.add_argument("--pretty", action="store_true", help="Render a human readable table")
    options.add_argument("--threads", type=int, help="Worker threads (default: MATROID_CHARSET_THREADS or 1)")
    options.add_argument("--seed", type=int, help="Seed for sampled checks")
    return options


def _system_options() -> argparse.ArgumentParser:
    options = CliArgumentParser(add_help=False)
    options.add_argument("--system", help="Equation system JSON file")
    options.add_argument("--family", choices=FAMILIES, help="Build a system from a family instead")
    options.add_argument("--n", type=int, help="Parameter of phi_n and root_of_unity")
    options.add_argument("--primes", help="Prime set, e.g. 3,5")
    return options


def _flock_options() -> argparse.ArgumentParser:
    options = CliArgumentParser(add_help=False)
    options.add_argument("--flock", help="Flock descriptor JSON file")
    options.add_argument("--matrix", help="Rational matrix JSON file for a valuation flock")
    options.add_argument("--rows", help="Rational matrix rows, e.g. '1,0,1,1;0,1,1,2'")
    options.add_argument("--ground", help="Column labels, e.g. a,b,c")
    options.add_argument("--p", type=int, help="Prime for a valuation flock")
    return options


def _window_options() -> argparse.ArgumentParser:
    options = CliArgumentParser(add_help=False)
    options.add_argument("--radius", type=int, help="Check the box [-r, r]^E")
    options.add_argument("--lower", help="Per-coordinate lower bounds, e.g. --lower=-1,0")
    options.add_argument("--upper", help="Per-coordinate upper bounds")
    return options


def build_parser() -> CliArgumentParser:
    common = _global_options()
    system = _system_options()
    flock = _flock_options()
    window = _window_options()

    parser = CliArgumentParser(prog="charsets", description="Characteristic sets of matroids: exact computations")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=CliArgumentParser)

    def add(group, name: str, handler: Handler, parents: Sequence[argparse.ArgumentParser] = (), **kwargs):
        command = group.add_parser(name, parents=[common, *parents], **kwargs)
        command.set_defaults(handler=handler)
        return command

    gb = verbs.add_parser("gb", help="Gordon-Brylawski prime sets").add_subparsers(dest="action", required=True)
    command = add(gb, "check", gb_check)
    command.add_argument("--primes")
    command.add_argument("--consecutive", action="store_true")
    command.add_argument("--start", type=int)
    command.add_argument("--count", type=int)
    command = add(gb, "search", gb_search_command)
    command.add_argument("--size", type=int, required=True)
    command.add_argument("--below", type=int)
    command.add_argument("--consecutive-from", "--start", dest="consecutive_from", type=int,
                         help="First prime of the consecutive windows")
    command.add_argument("--windows", type=int, default=1)
    command.add_argument("--limit", type=int)
    command = add(gb, "sequence", gb_sequence)
    command.add_argument("--primes", required=True)

    bry = verbs.add_parser("brylawski", help="Brylawski matrices").add_subparsers(dest="action", required=True)
    add(bry, "matrix", brylawski_matrix_command).add_argument("--primes", required=True)
    command = add(bry, "verify", brylawski_verify)
    command.add_argument("--primes", required=True)
    command.add_argument("--p", "--mod", dest="p", type=int, required=True)

    eqsys = verbs.add_parser("eqsys", help="Equation systems").add_subparsers(dest="action", required=True)
    add(eqsys, "build", eqsys_build, [system])
    add(eqsys, "validate", eqsys_validate, [system])
    add(eqsys, "propagate", eqsys_propagate, [system])
    command = add(eqsys, "badset", eqsys_badset, [system])
    command.add_argument("--below", type=int, default=100, help="Check every prime below this bound")
    command.add_argument("--check-primes", help="Explicit primes to check instead")
    command.add_argument("--differences", action="store_true", help="Include every difference polynomial")
    add(eqsys, "verify", eqsys_verify, [system]).add_argument("--assignment")
    command = add(eqsys, "search", eqsys_search, [system])
    command.add_argument("--p", type=int, required=True)
    command.add_argument("--m", type=int, default=1)
    command.add_argument("--limit", type=int)
    command = add(eqsys, "witness", eqsys_witness)
    command.add_argument("--kind", choices=("finite_all", "root_of_unity"), required=True)
    command.add_argument("--primes")
    command.add_argument("--n", type=int)
    command.add_argument("--p", type=int, required=True)
    command.add_argument("--degree", type=int)

    flocks = verbs.add_parser("flock", help="Linear and Frobenius flocks").add_subparsers(dest="action", required=True)
    add(flocks, "build", flock_build, [flock])
    add(flocks, "at", flock_at_command, [flock]).add_argument("--alpha", required=True)
    command = add(flocks, "stretch", flock_stretch, [flock])
    command.add_argument("--m", type=int, required=True)
    command.add_argument("--exponent", type=int, default=-1)
    command.add_argument("--field-degree", type=int)
    add(flocks, "dual", flock_dual, [flock])
    command = add(flocks, "check", flock_check, [flock, window])
    command.add_argument("--samples", type=int, default=LF1_PRIME_SAMPLE_SIZE)
    add(flocks, "support", flock_support, [flock, window])

    matroids = verbs.add_parser("matroid", help="Explicit matroids").add_subparsers(dest="action", required=True)
    command = add(matroids, "from-subspace", matroid_from_subspace_command)
    command.add_argument("--subspace")
    command.add_argument("--rows")
    command.add_argument("--ground")
    command.add_argument("--p", type=int)
    command.add_argument("--m", type=int, default=1)
    add(matroids, "dual", matroid_dual_command).add_argument("--matroid", required=True)
    command = add(matroids, "minor", matroid_minor_command)
    command.add_argument("--matroid", required=True)
    command.add_argument("--delete")
    command.add_argument("--contract")
    add(matroids, "circuits", matroid_circuits_command).add_argument("--matroid", required=True)
    command = add(matroids, "sum", matroid_sum_command)
    command.add_argument("--matroid", required=True)
    command.add_argument("--other", required=True)
    command.add_argument("--relabel", action="store_true")

    density = verbs.add_parser("density", help="Prime densities").add_subparsers(dest="action", required=True)
    add(density, "sieve", density_sieve).add_argument("--limit", type=int, required=True)
    command = add(density, "empirical", density_empirical)
    command.add_argument("--moduli", default="")
    command.add_argument("--limit", type=int, default=1_000_000)
    add(density, "theoretical", density_theoretical).add_argument("--moduli", required=True)
    command = add(density, "greedy", density_greedy)
    command.add_argument("--alpha", required=True)
    command.add_argument("--eps", required=True)
    command = add(density, "convergence", density_convergence_command)
    command.add_argument("--moduli", required=True)
    command.add_argument("--cutoffs", default="10000,100000,1000000")
    return parser


def _result(argv: Sequence[str], status: str, payload: Any) -> Dict[str, Any]:
    return {"schema_version": SCHEMA_VERSION, "command": list(argv), "status": status, "payload": payload}


def run_command(argv: Sequence[str], settings: Optional[Settings] = None) -> Tuple[Dict[str, Any], int]:
    """
    Parse argv, dispatch to the owning service and wrap the outcome.

    Returns:
        Tuple[Dict[str, Any], int]: The command result and the process exit code
    """
    argv = list(argv)
    try:
        args = build_parser().parse_args(argv)
        base = settings if settings is not None else get_settings()
        effective = base.with_overrides(threads=args.threads, seed=args.seed)
        payload, ok = args.handler(args, effective)
    except MalformedInputError as error:
        return _result(argv, STATUS_ERROR, error.to_payload()), EXIT_MALFORMED
    except CharsetError as error:
        logger.info("%s failed: %s", " ".join(argv[:2]), error.message)
        return _result(argv, STATUS_ERROR, error.to_payload()), EXIT_DOMAIN
    if ok:
        return _result(argv, STATUS_OK, payload), EXIT_OK
    return _result(argv, STATUS_VIOLATION, payload), EXIT_DOMAIN


def _out_path(argv: Sequence[str]) -> Optional[str]:
    for index, token in enumerate(argv):
        if token == "--out" and index + 1 < len(argv):
            return argv[index + 1]
        if token.startswith("--out="):
            return token.split("=", 1)[1]
    return None


def main(argv: Optional[Sequence[str]] = None) -> None:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        settings = get_settings()
    except CharsetError as error:
        print(json.dumps(_result(argv, STATUS_ERROR, error.to_payload()), indent=2))
        sys.exit(EXIT_DOMAIN)
    logging.basicConfig(stream=sys.stderr, level=settings.log_level,
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")

    result, code = run_command(argv, settings)
    out = _out_path(argv)
    if out:
        if not save_json_file(result, Path(out)):
            sys.exit(EXIT_DOMAIN)
    elif "--pretty" in argv:
        print(render_pretty(result))
    else:
        print(json.dumps(result, indent=2))
    sys.exit(code)


if __name__ == "__main__":
    main()
