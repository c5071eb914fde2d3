"""Command line interface.

Reports are printed one ``FIELD: value`` per line (or as JSON with
``--json``).  Exit status: 0 success, 1 semantic failure (invalid instance,
disagreement, failed check), 2 syntax or usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .checker import delta_walls, reduce_decorated, verdict_full, verdict_reduced
from .core import InvalidInstance, is_critical, mu_value, p_value, stab_value
from .fileformat import ParseError, dumps, format_rational, load, parse_rational, validate_instance
from .generators import FAMILIES, GeneratorConfig, stream
from .oracle import FAULTS, SUITES, run_all
from .orthogonal import ramanan_verdict
from .parabolic import parabolic_verdict, with_parabolic_degrees
from .splitter import split_full, verify_decomposition

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ParseError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> Fraction:
    value = _rational(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("delta must be positive")
    return value


def _fmt(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, (list, tuple)):
        return ", ".join(_fmt(v) for v in value) if value else "none"
    return str(value)


def _jsonable(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


def emit(fields: list[tuple[str, object]], as_json: bool, out=None) -> None:
    out = out or sys.stdout
    if as_json:
        doc: dict = {}
        for key, value in fields:
            doc.setdefault(key.lower(), []).append(_jsonable(value))
        doc = {k: v[0] if len(v) == 1 else v for k, v in doc.items()}
        print(json.dumps(doc, sort_keys=True), file=out)
    else:
        for key, value in fields:
            print(f"{key}: {_fmt(value)}", file=out)


def _load_valid(path: str, as_json: bool):
    """Load and validate, or report and return an exit code."""
    try:
        inst = load(path)
    except ParseError as exc:
        emit([("VALID", False), ("ERROR", str(exc))], as_json)
        return None, EXIT_USAGE
    problems = validate_instance(inst)
    if problems:
        emit([("KIND", inst.kind), ("VALID", False)] + [("PROBLEM", p) for p in problems], as_json)
        return None, EXIT_FAIL
    return inst, EXIT_OK


def _verdict_fields(prefix: str, verdict) -> list[tuple[str, object]]:
    return [
        (f"{prefix}CLASS", verdict.cls.value),
        (f"{prefix}WITNESS", list(verdict.witness) if verdict.witness else None),
        (f"{prefix}MARGIN", verdict.margin),
    ]


# -- commands ----------------------------------------------------------------------

def cmd_validate(args) -> int:
    inst, code = _load_valid(args.path, args.json)
    if inst is None:
        return code
    fields = [("KIND", inst.kind), ("VALID", True)]
    if inst.decorated is not None:
        rank = inst.data[0].rank if inst.kind == "filtration" else inst.catalog.rank
        degree = inst.data[0].degree if inst.kind == "filtration" else inst.catalog.degree
        meta = inst.decorated
        fields.append(("TWIST_DEGREE", reduce_decorated(meta.b, meta.c, meta.nN, rank, degree)))
    emit(fields, args.json)
    return EXIT_OK


def cmd_check(args) -> int:
    inst, code = _load_valid(args.path, args.json)
    if inst is None:
        return code
    delta = args.delta
    fields: list[tuple[str, object]] = [("KIND", inst.kind), ("DELTA", delta), ("MODE", args.mode)]
    if inst.kind == "filtration":
        f, m = inst.data
        fields += [
            ("P", p_value(f)),
            ("MU", mu_value(f, m)),
            ("STAB", stab_value(f, m, delta)),
            ("CRITICAL", is_critical(f, m)),
        ]
        emit(fields, args.json)
        return EXIT_OK

    if inst.kind == "parabolic":
        def run(mode):
            return parabolic_verdict(inst.data, delta, mode)
    else:
        def run(mode):
            return (verdict_full if mode == "full" else verdict_reduced)(inst.catalog, delta)

    code = EXIT_OK
    if args.mode == "both":
        full, reduced = run("full"), run("reduced")
        agree = full.cls == reduced.cls
        fields += _verdict_fields("FULL_", full) + _verdict_fields("REDUCED_", reduced) + [("AGREE", agree)]
        if not agree:
            code = EXIT_FAIL
    else:
        fields += _verdict_fields("", run(args.mode))
    if inst.kind == "orthogonal":
        ram = ramanan_verdict(inst.data)
        red = verdict_reduced(inst.catalog, delta)
        fields += _verdict_fields("RAMANAN_", ram) + [("RAMANAN_AGREES", ram.cls == red.cls)]
        if ram.cls != red.cls:
            code = EXIT_FAIL
    emit(fields, args.json)
    return code


def cmd_split(args) -> int:
    inst, code = _load_valid(args.path, args.json)
    if inst is None:
        return code
    if inst.kind != "filtration":
        emit([("ERROR", f"split needs a filtration instance, got {inst.kind}")], args.json)
        return EXIT_USAGE
    f, m = inst.data
    dec = split_full(f, m)
    failures = verify_decomposition(f, m, dec)
    fields: list[tuple[str, object]] = [("TRACE", dec.trace)]
    for piece in dec.pieces:
        sub, pat = f.subfiltration(piece.indices, piece.weights), m.restrict(piece.indices)
        text = "{" + ",".join(map(str, piece.indices)) + "} weights (" + ", ".join(map(_fmt, piece.weights)) + ")"
        text += f" P={_fmt(p_value(sub))} MU={_fmt(mu_value(sub, pat))}"
        if args.delta is not None:
            text += f" STAB={_fmt(stab_value(sub, pat, args.delta))}"
        fields.append(("PIECE", text))
    fields += [("P", p_value(f)), ("MU", mu_value(f, m))]
    if args.delta is not None:
        fields.append(("STAB", stab_value(f, m, args.delta)))
    fields.append(("CONSERVATION", "exact" if not failures else "failed"))
    fields += [("FAILURE", msg) for msg in failures]
    emit(fields, args.json)
    return EXIT_OK if not failures else EXIT_FAIL


def cmd_walls(args) -> int:
    if args.lo >= args.hi:
        print("error: need lo < hi", file=sys.stderr)
        return EXIT_USAGE
    inst, code = _load_valid(args.path, args.json)
    if inst is None:
        return code
    if inst.kind == "filtration":
        emit([("ERROR", "walls needs a catalog instance")], args.json)
        return EXIT_USAGE
    cat = inst.catalog
    if inst.kind == "parabolic":
        cat = with_parabolic_degrees(inst.data)
    walls = delta_walls(cat, args.lo, args.hi)
    if args.csv:
        print("delta")
        for w in walls:
            print(format_rational(w))
        return EXIT_OK
    emit([("LO", args.lo), ("HI", args.hi), ("WALLS", walls)], args.json)
    return EXIT_OK


def cmd_gen(args) -> int:
    cfg = GeneratorConfig(
        seed=args.seed,
        rank_bound=args.rank_bound,
        length_bound=args.length_bound,
        degree_bound=args.degree_bound,
        den_bound=args.den_bound,
        family=args.family,
        max_elements=args.max_elements,
    )
    try:
        cfg.check()
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        for inst in stream(cfg, args.count):
            print(dumps(inst), file=out)
    finally:
        if args.out:
            out.close()
    return EXIT_OK


def cmd_oracle(args) -> int:
    fields: list[tuple[str, object]] = [("SEED", args.seed)]
    if args.trials == 0:
        fields.append(("WARNING", "zero trials requested; every suite passes vacuously"))
        emit(fields + [("RESULT", "pass")], args.json)
        return EXIT_OK
    results = run_all(args.trials, args.seed, args.fault, args.jobs, args.suite)
    for res in results:
        status = "pass" if res.passed else "fail"
        fields.append((f"SUITE_{res.number}", f"{status} trials={res.trials} failures={len(res.failures)} ({res.name})"))
        fields += [(f"FAILURE_{res.number}", msg) for msg in res.failures[: args.show]]
    ok = all(r.passed for r in results)
    fields.append(("RESULT", "pass" if ok else "fail"))
    emit(fields, args.json)
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quadstab", description="Exact semistability checks for quadric bundles.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, path=True):
        p = sub.add_parser(name, help=help_text)
        if path:
            p.add_argument("path", help="instance file (JSON)")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate, "parse and validate an instance file")
    p = add("check", cmd_check, "stability verdict of an instance")
    p.add_argument("--delta", type=_positive, required=True, help="positive rational, e.g. 1/2")
    p.add_argument("--mode", choices=("full", "reduced", "both"), default="both")
    p = add("split", cmd_split, "split a weighted filtration into length <= 2 pieces")
    p.add_argument("--delta", type=_positive, default=None)
    p = add("walls", cmd_walls, "values of delta where the verdict changes")
    p.add_argument("--lo", type=_positive, required=True)
    p.add_argument("--hi", type=_positive, required=True)
    p.add_argument("--csv", action="store_true", help="print the walls as CSV")

    p = add("gen", cmd_gen, "generate a stream of random instances (JSON lines)", path=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=10)
    p.add_argument("--family", choices=FAMILIES, default="generic")
    p.add_argument("--rank-bound", type=int, default=10)
    p.add_argument("--length-bound", type=int, default=8)
    p.add_argument("--degree-bound", type=int, default=6)
    p.add_argument("--den-bound", type=int, default=16)
    p.add_argument("--max-elements", type=int, default=8)
    p.add_argument("--out", help="write to this file instead of standard output")

    p = add("oracle", cmd_oracle, "run the property battery", path=False)
    p.add_argument("--trials", type=int, default=None, help="trials per random suite (default: full counts)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--suite", type=int, action="append", choices=[s.number for s in SUITES])
    p.add_argument("--show", type=int, default=10, help="failures listed per suite")
    p.add_argument("--fault", choices=FAULTS, default=None, help=argparse.SUPPRESS)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "trials", None) is not None and args.trials < 0:
        print("error: --trials must be nonnegative", file=sys.stderr)
        return EXIT_USAGE
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
