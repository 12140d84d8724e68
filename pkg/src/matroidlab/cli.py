"""Command-line front end.

Exit codes: 0 success, 1 usage or I/O error, 2 a verdict came out false,
3 theorem alarm (a guaranteed property failed, i.e. a bug).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor

from . import cochain, gradedalg, matching, tropical
from .errors import (
    AxiomViolation,
    LoopDetected,
    TheoremAlarm,
    WorkbenchError,
)
from .exactlin import FieldSpec, QQ, format_rational
from .matroid import MAX_EXHAUSTIVE_AXIOMS, Matroid, check_axioms, elements_of, matroid_from_json, to_mask
from .mobius import MobiusAlgebra, OmegaWeights

log = logging.getLogger("matroidlab")

EXIT_OK, EXIT_USAGE, EXIT_VERDICT, EXIT_ALARM = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


class _Done(Exception):
    def __init__(self, code):
        self.code = code


def _emit_json(out, obj):
    out.write(json.dumps(obj, indent=2))
    out.write("\n")


def _emit_csv(out, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    out.write(buf.getvalue())


def _members(elems) -> str:
    return " ".join(map(str, elems))


def _load_input(args, stdin):
    try:
        if args.input and args.input != "-":
            with open(args.input, encoding="utf-8") as fh:
                return json.load(fh)
        return json.load(stdin)
    except OSError as exc:
        raise UsageError(f"cannot read input: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"input is not valid JSON: {exc}") from exc


def _load_matroid(args, stdin) -> Matroid:
    return matroid_from_json(_load_input(args, stdin))


def _parse_flat(text: str) -> int:
    text = text.strip()
    if not text:
        return 0
    try:
        return to_mask(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --flat {text!r}; expected comma-separated indices") from exc


def _parse_weights(text):
    if text is None:
        return None
    return OmegaWeights([x.strip() for x in text.split(",")])


def _parse_field(text: str) -> FieldSpec:
    if text in ("Q", "q", "QQ"):
        return QQ
    try:
        return FieldSpec(int(text))
    except ValueError as exc:
        raise UsageError(f"bad --field {text!r}; use Q or a prime") from exc


def _require_format(args, allowed):
    if args.format not in allowed:
        raise UsageError(f"--format {args.format} not supported here; choose from {', '.join(allowed)}")


# ---------------------------------------------------------------- matroid verbs


def cmd_matroid_info(args, stdin, out):
    _require_format(args, ("json",))
    M = _load_matroid(args, stdin)
    _emit_json(
        out,
        {
            "n": M.n,
            "rank": M.rank_total,
            "kind": M.kind,
            "name": M.name,
            "has_realization": M.realization is not None,
        },
    )


def cmd_matroid_flats(args, stdin, out):
    _require_format(args, ("json", "csv"))
    lattice = _load_matroid(args, stdin).flats()
    if args.format == "csv":
        rows = [
            (r, k, _members(F.elements()))
            for r, level in enumerate(lattice.flats_by_rank)
            for k, F in enumerate(level)
        ]
        _emit_csv(out, ("rank", "index", "members"), rows)
    else:
        _emit_json(out, lattice.to_json())


def cmd_matroid_whitney(args, stdin, out):
    _require_format(args, ("json", "csv"))
    w = _load_matroid(args, stdin).whitney()
    if args.format == "csv":
        _emit_csv(out, ("rank", "count"), list(enumerate(w)))
    else:
        _emit_json(out, {"whitney": w})


def cmd_matroid_check_axioms(args, stdin, out):
    _require_format(args, ("json",))
    M = _load_matroid(args, stdin)
    mode = args.mode or ("exhaustive" if M.n <= MAX_EXHAUSTIVE_AXIOMS else "randomized")
    report = check_axioms(M, mode, trials=args.trials, seed=args.seed)
    _emit_json(out, report.to_json())
    if not report.passed:
        log.error("%d axiom violation(s)", len(report.violations))
        raise _Done(EXIT_VERDICT)


def cmd_matroid_circuits(args, stdin, out):
    _require_format(args, ("json", "csv"))
    M = _load_matroid(args, stdin)
    circuits = [elements_of(c) for c in M.circuits()]
    if args.format == "csv":
        _emit_csv(out, ("size", "members"), [(len(c), _members(c)) for c in circuits])
    else:
        _emit_json(out, {"circuits": circuits})


def _minor_summary(N: Matroid) -> dict:
    return {"ground": list(N.labels), "n": N.n, "rank": N.rank_total, "whitney": N.whitney()}


def cmd_matroid_restrict(args, stdin, out):
    _require_format(args, ("json",))
    M = _load_matroid(args, stdin)
    _emit_json(out, _minor_summary(M.restriction(_parse_flat(args.flat))))


def cmd_matroid_contract(args, stdin, out):
    _require_format(args, ("json",))
    M = _load_matroid(args, stdin)
    _emit_json(out, _minor_summary(M.contraction(_parse_flat(args.flat))))


# ---------------------------------------------------------------- mobius verbs


def cmd_mobius_dims(args, stdin, out):
    _require_format(args, ("json", "csv"))
    dims = MobiusAlgebra(_load_matroid(args, stdin)).dims()
    if args.format == "csv":
        _emit_csv(out, ("degree", "dim"), list(enumerate(dims)))
    else:
        _emit_json(out, {"dims": dims})


def cmd_mobius_omega_matrix(args, stdin, out):
    _require_format(args, ("json", "csv"))
    A = MobiusAlgebra(_load_matroid(args, stdin))
    dump = A.matrix_dump(args.r, args.r_prime, _parse_weights(args.weights))
    if args.format == "csv":
        _emit_csv(out, ["row"] + [f"col{j}" for j in dump["cols"]], [[i] + row for i, row in zip(dump["rows"], dump["entries"])])
    else:
        _emit_json(out, dump)


# ---------------------------------------------------------------- matching verbs


def cmd_matching_verify(args, stdin, out):
    _require_format(args, ("json",))
    M = _load_matroid(args, stdin)
    w = _parse_weights(args.weights)
    A = MobiusAlgebra(M)
    inside = args.r + args.r_prime <= M.rank_total
    report = {
        "r": args.r,
        "r_prime": args.r_prime,
        "weights": "unit" if w is None or w.is_unit else [format_rational(c) for c in w.c],
        "in_theorem_range": inside,
    }
    try:
        ok = matching.verify_injectivity(M, args.r, args.r_prime, w, exploratory=args.exploratory, algebra=A)
    except TheoremAlarm as alarm:
        report.update(injective=False, alarm=str(alarm))
        _emit_json(out, report)
        raise
    report["injective"] = ok
    if not inside:
        report["note"] = "outside theorem"
    _emit_json(out, report)
    if not ok:
        raise _Done(EXIT_VERDICT)


def cmd_matching_extract(args, stdin, out):
    _require_format(args, ("json", "csv", "dot"))
    M = _load_matroid(args, stdin)
    A = MobiusAlgebra(M)
    result = matching.extract_matching(M, args.r, args.r_prime, exploratory=args.exploratory, algebra=A)
    if args.format == "dot":
        out.write(result.to_dot(matching.support_graph(M, args.r, args.r_prime, A)))
    elif args.format == "csv":
        _emit_csv(out, ("flat", "image"), [(_members(F.elements()), _members(G.elements())) for F, G in result.pairs])
    else:
        obj = result.to_json()
        if not result.in_theorem_range:
            obj["note"] = "outside theorem"
        _emit_json(out, obj)
    if not result.complete:
        raise _Done(EXIT_VERDICT)


def cmd_matching_topheavy(args, stdin, out):
    _require_format(args, ("json",))
    report = matching.top_heavy_report(_load_matroid(args, stdin))
    _emit_json(out, report.to_json())
    if not report.passed:
        log.error("top-heavy inequality violated")
        raise _Done(EXIT_ALARM)


# ---------------------------------------------------------------- gradedalg verbs


def _load_spec(args, stdin):
    return gradedalg.MonomialAlgebraSpec.from_json(_load_input(args, stdin))


def cmd_gradedalg_dims(args, stdin, out):
    _require_format(args, ("json", "csv"))
    spec = _load_spec(args, stdin)
    dims = gradedalg.graded_dims(spec)
    if args.format == "csv":
        _emit_csv(out, ("degree", "dim"), list(enumerate(dims)))
    else:
        _emit_json(out, {"spec": spec.to_json(), "topdeg": spec.topdeg, "dims": dims})


def cmd_gradedalg_hlp(args, stdin, out):
    _require_format(args, ("json",))
    report = gradedalg.hlp_check(_load_spec(args, stdin))
    _emit_json(out, report.to_json())
    if not report.passed:
        raise _Done(EXIT_VERDICT)


def cmd_gradedalg_palindrome(args, stdin, out):
    _require_format(args, ("json",))
    spec = _load_spec(args, stdin)
    dims = gradedalg.graded_dims(spec)
    ok = gradedalg.palindrome_check(dims)
    _emit_json(out, {"spec": spec.to_json(), "dims": dims, "palindromic": ok, "unimodal": gradedalg.unimodal_check(dims)})
    if not ok:
        raise _Done(EXIT_VERDICT)


# ---------------------------------------------------------------- tropical verbs


def _load_space(obj) -> tropical.TropLinearSpace:
    if "matroid" in obj:
        return tropical.tropical_linear_space(matroid_from_json(obj["matroid"]))
    return tropical.TropLinearSpace.from_lists(int(obj["n"]), obj["circuits"])


def cmd_tropical_member(args, stdin, out):
    _require_format(args, ("json",))
    obj = _load_input(args, stdin)
    T = _load_space(obj)
    points = obj["points"] if "points" in obj else [obj["point"]]
    _emit_json(out, {"members": [tropical.member(T, tropical.parse_point(p)) for p in points]})


def cmd_tropical_eval(args, stdin, out):
    _require_format(args, ("json",))
    obj = _load_input(args, stdin)
    p = tropical.TropPolynomial.from_json(obj["polynomial"])
    xi = tropical.parse_point(obj["point"])
    value, count = tropical.trop_eval(p, xi)
    _emit_json(
        out,
        {"value": tropical.format_trop(value), "argmax_count": count, "vanishes": tropical.vanishes(p, xi)},
    )


def cmd_tropical_circuits(args, stdin, out):
    _require_format(args, ("json",))
    _emit_json(out, tropical.tropical_linear_space(_load_matroid(args, stdin)).to_json())


# ---------------------------------------------------------------- cochain verbs


def cmd_cochain_dims(args, stdin, out):
    _require_format(args, ("json",))
    X = cochain.CellComplex2.from_json(_load_input(args, stdin))
    field = _parse_field(args.field)
    h = cochain.cohomology_dims(X, field)
    _emit_json(out, {"field": field.to_json(), "h": list(h)})


def cmd_cochain_euler(args, stdin, out):
    _require_format(args, ("json",))
    X = cochain.CellComplex2.from_json(_load_input(args, stdin))
    h = cochain.cohomology_dims(X, _parse_field(args.field))
    _emit_json(
        out,
        {
            "V": X.V,
            "E": X.E,
            "F": X.F,
            "euler_characteristic": X.euler_characteristic,
            "alternating_sum": h[0] - h[1] + h[2],
        },
    )


def cmd_cochain_torus_grid(args, stdin, out):
    _require_format(args, ("json",))
    _emit_json(out, cochain.torus_grid(args.k).to_json())


# ---------------------------------------------------------------- verify-all


def verify_all(M: Matroid, jobs: int = 1) -> dict:
    """Axioms, top-heaviness, injectivity and matchings for every (r, r')."""
    mode = "exhaustive" if M.n <= MAX_EXHAUSTIVE_AXIOMS else "randomized"
    axioms = check_axioms(M, mode)
    top = matching.top_heavy_report(M)
    A = MobiusAlgebra(M)
    pairs = matching.theorem_pairs(M)
    # fill caches up front so worker threads only read
    for k in range(M.rank_total):
        A.omega_step_matrix(k)

    def one(pair):
        r, rp = pair
        entry = {"r": r, "r_prime": rp}
        try:
            entry["injective"] = matching.verify_injectivity(M, r, rp, algebra=A)
            res = matching.extract_matching(M, r, rp, algebra=A)
            entry["matching_complete"] = res.complete
        except TheoremAlarm as alarm:
            entry["alarm"] = str(alarm)
            return entry
        g = matching.containment_graph(M, r, rp)
        entry["hall"] = matching.brute_force_matching_exists(g) if len(g.left) <= 12 else None
        if entry["hall"] is False:
            entry["alarm"] = "Hall oracle disagrees with the extracted matching"
        return entry

    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            checks = list(pool.map(one, pairs))
    else:
        checks = [one(p) for p in pairs]
    alarms = [c for c in checks if "alarm" in c] + ([] if top.passed else [{"top_heavy": False}])
    return {
        "matroid": {"n": M.n, "rank": M.rank_total, "kind": M.kind, "name": M.name},
        "whitney": top.whitney,
        "axioms": axioms.to_json(),
        "top_heavy": top.to_json(),
        "theorem_checks": checks,
        "alarms": len(alarms),
        "pass": axioms.passed and not alarms,
    }


def cmd_verify_all(args, stdin, out):
    _require_format(args, ("json",))
    report = verify_all(_load_matroid(args, stdin), jobs=args.jobs)
    _emit_json(out, report)
    if report["alarms"]:
        raise _Done(EXIT_ALARM)
    if not report["axioms"]["pass"]:
        raise _Done(EXIT_VERDICT)


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="matroidlab", description="Matroid flats, Möbius algebras and injective flat matchings.")
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging on stderr")
    groups = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def verb(sub, name, func, help_, needs_input=True):
        p = sub.add_parser(name, help=help_)
        if needs_input:
            p.add_argument("--input", "-i", help="JSON input file (default: stdin)")
        p.add_argument("--format", "-f", default="json", choices=("json", "csv", "dot"))
        p.set_defaults(func=func)
        return p

    def ranks(p):
        p.add_argument("--r", type=int, required=True)
        p.add_argument("--r-prime", type=int, required=True, dest="r_prime")

    g = groups.add_parser("matroid", help="matroid constructions and queries")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    verb(sub, "info", cmd_matroid_info, "ground set size, rank, kind")
    verb(sub, "flats", cmd_matroid_flats, "flat lattice by rank")
    verb(sub, "whitney", cmd_matroid_whitney, "number of flats of each rank")
    p = verb(sub, "check-axioms", cmd_matroid_check_axioms, "verify the rank axioms")
    p.add_argument("--mode", choices=("exhaustive", "randomized"))
    p.add_argument("--trials", type=int, default=2000)
    p.add_argument("--seed", type=int, default=0)
    verb(sub, "circuits", cmd_matroid_circuits, "minimal dependent sets")
    p = verb(sub, "restrict", cmd_matroid_restrict, "restriction to a flat")
    p.add_argument("--flat", required=True, help="comma-separated members")
    p = verb(sub, "contract", cmd_matroid_contract, "contraction of a flat")
    p.add_argument("--flat", required=True, help="comma-separated members")

    g = groups.add_parser("mobius", help="graded Möbius algebra")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    verb(sub, "dims", cmd_mobius_dims, "graded dimensions")
    p = verb(sub, "omega-matrix", cmd_mobius_omega_matrix, "matrix of a power of omega")
    ranks(p)
    p.add_argument("--weights", help="comma-separated positive rationals, one per rank-1 flat")

    g = groups.add_parser("matching", help="injectivity and flat matchings")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = verb(sub, "verify", cmd_matching_verify, "is omega^(r'-r) injective on degree r")
    ranks(p)
    p.add_argument("--weights")
    p.add_argument("--exploratory", action="store_true", help="allow r + r' > rank")
    p = verb(sub, "extract", cmd_matching_extract, "injective containment matching")
    ranks(p)
    p.add_argument("--exploratory", action="store_true")
    verb(sub, "topheavy", cmd_matching_topheavy, "top-heavy inequalities")

    g = groups.add_parser("gradedalg", help="monomial quotient algebras")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    verb(sub, "dims", cmd_gradedalg_dims, "graded dimensions")
    verb(sub, "hlp", cmd_gradedalg_hlp, "hard Lefschetz check")
    verb(sub, "palindrome", cmd_gradedalg_palindrome, "symmetry of the dimensions")

    g = groups.add_parser("tropical", help="max-plus evaluation and tropical linear spaces")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    verb(sub, "member", cmd_tropical_member, "membership in a tropical linear space")
    verb(sub, "eval", cmd_tropical_eval, "evaluate a tropical polynomial")
    verb(sub, "circuits", cmd_tropical_circuits, "tropical linear space of a matroid")

    g = groups.add_parser("cochain", help="cochain complexes on surfaces")
    sub = g.add_subparsers(dest="verb", required=True, parser_class=_Parser)
    p = verb(sub, "dims", cmd_cochain_dims, "cohomology dimensions")
    p.add_argument("--field", default="Q")
    p = verb(sub, "euler", cmd_cochain_euler, "Euler characteristic identity")
    p.add_argument("--field", default="Q")
    p = verb(sub, "torus-grid", cmd_cochain_torus_grid, "emit the k x k torus mesh", needs_input=False)
    p.add_argument("--k", type=int, required=True)

    p = verb(groups, "verify-all", cmd_verify_all, "full theorem suite on one matroid")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def run(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    try:
        try:
            args = build_parser().parse_args(argv)
        except UsageError as exc:
            log.error("%s", exc)
            return EXIT_USAGE
        log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
        try:
            args.func(args, stdin, stdout)
        except _Done as done:
            return done.code
        except UsageError as exc:
            log.error("%s", exc)
            return EXIT_USAGE
        except TheoremAlarm as alarm:
            log.error("THEOREM ALARM: %s", alarm)
            payload = alarm.payload
            if hasattr(payload, "to_json"):
                payload = payload.to_json()
            if payload is not None:
                stderr.write(json.dumps(payload, indent=2, default=str) + "\n")
            return EXIT_ALARM
        except (AxiomViolation, LoopDetected) as exc:
            log.error("%s", exc)
            if isinstance(exc, AxiomViolation) and exc.report is not None:
                stderr.write(json.dumps(exc.report.to_json(), indent=2) + "\n")
            return EXIT_VERDICT
        except (WorkbenchError, KeyError, TypeError, ValueError) as exc:
            log.error("%s: %s", type(exc).__name__, exc)
            return EXIT_USAGE
        return EXIT_OK
    finally:
        log.removeHandler(handler)


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
