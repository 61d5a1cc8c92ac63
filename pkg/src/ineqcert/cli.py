"""Command-line entry point: ``python -m ineqcert <command> ...``.

Exit codes: 0 success, 1 a violation was found (or, for ``mutate``, the
expected violation was not), 2 too many undetermined verdicts, 3 usage or
input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .exact_numeric import DEFAULT_SCHEDULE, format_rational, parse_rational
from .generate import GEN_STATEMENTS, GenSpec, enumerate_integer_conjugate_tuples
from .inequalities import CheckConfig, InvalidInstance, Mode
from .instances import instance_from_json
from .menelaus import GeometryError, transversal_points
from .mutate import MUTATIONS
from .report import (
    EXIT_OK,
    EXIT_UNDETERMINED,
    EXIT_USAGE,
    EXIT_VIOLATED,
    Report,
    Stopwatch,
    dumps,
    results_csv,
    run_campaign,
)
from .search import TIGHT_STATEMENTS, counterexample_search, default_checker, tightness_search
from .trace import MalformedTrace, build_trace, verify_trace


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _range(text: str) -> tuple[int, int]:
    """``"4"`` or ``"2:5"`` (inclusive)."""
    try:
        if ":" in text:
            lo, hi = text.split(":", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO:HI, got {text!r}") from None


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _add_gen_flags(p: argparse.ArgumentParser):
    p.add_argument("--n", type=_range, help="rows (polygon size for menelaus): N or LO:HI")
    p.add_argument("--m", type=_range, help="columns: N or LO:HI")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file with generator fields")
    p.add_argument("--num-bits", type=int)
    p.add_argument("--den-bits", type=int)
    p.add_argument("--exponent-mode", choices=("integer", "rational"))
    p.add_argument("--p", type=_rational, action="append",
                   help="Minkowski exponent (repeat for several)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ineqcert", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run a fuzzed verification campaign")
    v.add_argument("statement", choices=GEN_STATEMENTS)
    _add_gen_flags(v)
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--mode", choices=("exact", "interval"), default="exact")
    v.add_argument("--precision-cap", type=int, help="largest precision (bits) in the schedule")
    v.add_argument("--no-equality-detection", action="store_true")
    v.add_argument("--max-undetermined", type=int, help="default: unlimited")
    v.add_argument("--format", choices=("json", "csv"), default="json")
    v.add_argument("--out")

    t = sub.add_parser("trace", help="build and verify a proof trace for one instance")
    t.add_argument("statement", choices=("holder", "minkowski", "chebyshev", "menelaus"))
    t.add_argument("instance_file")
    t.add_argument("--mode", choices=("exact", "interval"), default="exact")
    t.add_argument("--out")

    e = sub.add_parser("enumerate-exponents", help="list integer conjugate exponent tuples")
    e.add_argument("--m", type=int, required=True)
    e.add_argument("--out")

    s = sub.add_parser("search-tight", help="climb the slack ratio toward 1")
    s.add_argument("statement", choices=TIGHT_STATEMENTS)
    _add_gen_flags(s)
    s.add_argument("--budget", type=int, default=500)
    s.add_argument("--out")

    mu = sub.add_parser("mutate", help="negative control: search a broken generator for a violation")
    mu.add_argument("statement", choices=GEN_STATEMENTS)
    mu.add_argument("--break", dest="kind", required=True, choices=tuple(MUTATIONS))
    _add_gen_flags(mu)
    mu.add_argument("--budget", type=int, default=1000)
    mu.add_argument("--out")

    g = sub.add_parser("geom", help="transversal points and ratios of a polygon configuration")
    g.add_argument("config_file")
    g.add_argument("--out")
    return parser


def _gen_spec(args, statement: str, mutation: str | None = None) -> GenSpec:
    fields: dict = {}
    if args.config:
        try:
            with open(args.config) as fh:
                fields = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"{args.config}: {exc}") from None
        if not isinstance(fields, dict):
            raise UsageError(f"{args.config}: expected a JSON object")
        if fields.get("statement", statement) != statement:
            raise UsageError(f"config is for {fields['statement']!r}, not {statement!r}")
    fields["statement"] = statement
    for key, value in (("n_range", args.n), ("m_range", args.m), ("num_bits", args.num_bits),
                       ("den_bits", args.den_bits), ("exponent_mode", args.exponent_mode)):
        if value is not None:
            fields[key] = value
    if args.p:
        fields["p_choices"] = [format_rational(p) for p in args.p]
    if mutation is not None:
        fields["mutation"] = mutation
    try:
        return GenSpec.from_json(fields)
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None


def _config(mode: str, cap: int | None = None, equality_detection: bool = True) -> CheckConfig:
    if cap is not None and cap < DEFAULT_SCHEDULE[0]:
        raise UsageError(f"--precision-cap must be at least {DEFAULT_SCHEDULE[0]}")
    return CheckConfig.capped(Mode(mode), cap, equality_detection)


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args, argv) -> int:
    if args.trials < 0:
        raise UsageError("--trials must be >= 0")
    spec = _gen_spec(args, args.statement)
    cfg = _config(args.mode, args.precision_cap, not args.no_equality_detection)
    with Stopwatch() as sw:
        results = run_campaign(spec, args.trials, args.seed, cfg)
    params = {"generator": spec.to_json(), "mode": args.mode,
              "precision_schedule": list(cfg.precision_schedule),
              "equality_detection": cfg.equality_detection,
              "max_undetermined": args.max_undetermined}
    report = Report.from_results(argv, args.seed, args.statement, params, results, sw.ms)
    _emit(results_csv(results) if args.format == "csv" else report.dumps(), args.out)
    return report.exit_code(args.max_undetermined)


def cmd_trace(args, argv) -> int:
    try:
        with open(args.instance_file) as fh:
            inst = instance_from_json(json.load(fh))
        if inst.statement != args.statement:
            raise UsageError(f"instance is for {inst.statement!r}, not {args.statement!r}")
        trace = build_trace(inst)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, GeometryError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{args.instance_file}: {exc}") from None
    verdict = verify_trace(trace, _config(args.mode))
    _emit(dumps({"command": argv, "trace": trace.to_json(), "verdict": verdict.to_json(),
                 "tool_version": __version__}), args.out)
    if verdict.any_step_violated:
        return EXIT_VIOLATED
    return EXIT_OK if verdict.overall.certified else EXIT_UNDETERMINED


def cmd_enumerate(args, argv) -> int:
    if args.m < 2:
        raise UsageError("--m must be >= 2")
    tuples = enumerate_integer_conjugate_tuples(args.m)
    _emit(dumps({"command": argv, "m": args.m, "count": len(tuples),
                 "tuples": [list(t) for t in tuples], "tool_version": __version__}), args.out)
    return EXIT_OK


def _budget(args):
    if args.budget < 1:
        raise UsageError("--budget must be >= 1")


def cmd_search_tight(args, argv) -> int:
    _budget(args)
    spec = _gen_spec(args, args.statement)
    with Stopwatch() as sw:
        result = tightness_search(args.statement, None, args.budget, args.seed, spec)
    _emit(dumps({"command": argv, "seed": args.seed, "statement": args.statement,
                 "budget": args.budget, "parameters": {"generator": spec.to_json()},
                 "best": result.to_json(), "runtime_ms": sw.ms,
                 "tool_version": __version__}), args.out)
    return EXIT_OK


def cmd_mutate(args, argv) -> int:
    _budget(args)
    if args.statement not in MUTATIONS[args.kind]:
        raise UsageError(f"mutation {args.kind!r} does not apply to {args.statement!r}")
    spec = _gen_spec(args, args.statement, args.kind)
    with Stopwatch() as sw:
        found = counterexample_search(default_checker(), spec, args.budget, args.seed)
    _emit(dumps({"command": argv, "seed": args.seed, "statement": args.statement,
                 "mutation": args.kind, "budget": args.budget,
                 "parameters": {"generator": spec.to_json()},
                 "found": found is not None,
                 "result": None if found is None else found.to_json(),
                 "runtime_ms": sw.ms, "tool_version": __version__}), args.out)
    return EXIT_OK if found is not None else EXIT_VIOLATED


def cmd_geom(args, argv) -> int:
    try:
        with open(args.config_file) as fh:
            inst = instance_from_json(json.load(fh))
        if inst.statement != "menelaus":
            raise UsageError("geom needs a menelaus configuration")
        tv = transversal_points(*inst.data)
    except (OSError, json.JSONDecodeError, KeyError, ValueError, GeometryError) as exc:
        if isinstance(exc, UsageError):
            raise
        raise UsageError(f"{args.config_file}: {exc}") from None
    _emit(dumps({"command": argv, "points": [p.to_json() for p in tv.points],
                 "ratios": [format_rational(r) for r in tv.ratios],
                 "product": format_rational(tv.product), "tool_version": __version__}), args.out)
    return EXIT_OK if tv.product == 1 else EXIT_VIOLATED


COMMANDS = {"verify": cmd_verify, "trace": cmd_trace, "enumerate-exponents": cmd_enumerate,
            "search-tight": cmd_search_tight, "mutate": cmd_mutate, "geom": cmd_geom}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args, argv)
    except (UsageError, InvalidInstance, MalformedTrace) as exc:
        print(f"ineqcert: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
