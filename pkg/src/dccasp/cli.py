"""Command-line front end: analyze, solve, enumerate, bench.

Exit status: 0 success (at least one answer, or a report was produced),
1 query failed, 2 usage or parse error, 3 resource limit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional, Sequence

from . import __version__
from .analysis import analyze, format_report
from .bench import BenchSpec, QUERY_ATOM, format_rows, rows_to_dicts, run_bench, suite_specs
from .engine import Mode, SolveConfig, Solver, StepLimitExceeded
from .oracle import DEFAULT_ATOM_LIMIT, AtomLimitExceeded, enumerate_answer_sets
from .syntax import ParseError, Program, concat_programs, parse_program, parse_query

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3
FORMAT_ENV = "DCCASP_FORMAT"


class UsageError(Exception):
    pass


def _load(paths: Sequence[str]) -> Program:
    progs = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
        try:
            progs.append(parse_program(text))
        except ParseError as exc:
            raise UsageError(f"{path}:{exc}") from exc
    return concat_programs(progs)


def _cmd_analyze(args) -> int:
    program = _load(args.files)
    cp, part = analyze(program)
    sys.stdout.write(format_report(cp, part, args.format))
    return EXIT_OK


def _trace(event, detail) -> None:
    print(f"[{event}] {detail}", file=sys.stderr)


def _cmd_solve(args) -> int:
    program = _load(args.files)
    if args.query is not None:
        try:
            query, program = parse_query(args.query, program)
        except ParseError as exc:
            raise UsageError(f"query:{exc}") from exc
    elif program.query is not None:
        query = program.query
    else:
        raise UsageError("solve needs a query (-q/--query or a '?- ...' directive in a program file)")
    mode = Mode.FULL if args.full else Mode(args.mode)
    cfg = SolveConfig(mode, step_limit=args.step_limit, enumerate=args.max_answers)
    cp, part = analyze(program)
    hook = _trace if args.trace else None
    try:
        answers = Solver(cp, part).solve(query, cfg, hook)
    except StepLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.format == "json":
        payload = [
            {"positives": sorted(a.positives)} if args.positives_only else a.to_json() for a in answers
        ]
        json.dump({"query": program.query_str(query), "mode": mode.value, "answers": payload}, sys.stdout)
        sys.stdout.write("\n")
    else:
        for a in answers:
            lits = sorted(a.positives) if args.positives_only else a.literals()
            print("{ " + ", ".join(lits) + " }" if lits else "{ }")
        if not answers:
            print("no partial answer set", file=sys.stderr)
    return EXIT_OK if answers else EXIT_FAILED


def _cmd_enumerate(args) -> int:
    program = _load(args.files)
    try:
        answers = enumerate_answer_sets(program, args.atom_limit)
    except AtomLimitExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    if args.format == "json":
        json.dump([sorted(a.names) for a in answers], sys.stdout)
        sys.stdout.write("\n")
    else:
        for a in answers:
            print(a)
    return EXIT_OK


def _parse_family(text: str) -> tuple[str, dict]:
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise UsageError(f"bad family parameter {item!r} (expected key=value)")
        try:
            params[key.strip()] = int(value)
        except ValueError as exc:
            raise UsageError(f"family parameter {key} must be an integer") from exc
    return name.strip(), params


def _cmd_bench(args) -> int:
    if args.family:
        fams = [_parse_family(f) for f in args.family]
        for name, _ in fams:
            if name not in QUERY_ATOM:
                raise UsageError(f"unknown family {name!r}")
        if len(fams) == 1:
            family, params = fams[0]
            default_q = [QUERY_ATOM[family]]
            problem = args.family[0]
        else:
            family, params = "concat", {"parts": fams}
            default_q = [f"c{i + 1}_{QUERY_ATOM[n]}" for i, (n, _) in enumerate(fams)]
            problem = "-".join(n for n, _ in fams)
        queries = [(q, q) for q in (args.query or default_q)]
        specs = [BenchSpec(problem, family, params, queries, repetitions=args.repetitions,
                           step_limit=args.step_limit)]
    else:
        specs = [
            BenchSpec(s.problem, s.family, s.params, s.queries, s.modes, args.repetitions, args.step_limit)
            for s in suite_specs(args.repetitions, args.scale)
        ]
    rows = []
    for spec in specs:
        try:
            rows.extend(run_bench(spec))
        except ParseError as exc:
            raise UsageError(f"query:{exc}") from exc
    sys.stdout.write(format_rows(rows, args.format))
    if args.plot:
        from .plotting import plot_rows

        plot_rows(rows, args.plot)
        print(f"figure written to {args.plot}", file=sys.stderr)
    if args.rows_json:
        with open(args.rows_json, "w", encoding="utf-8") as fh:
            json.dump(rows_to_dicts(rows), fh, indent=2)
    return EXIT_LIMIT if any(r.step_limit_hit for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    default_fmt = os.environ.get(FORMAT_ENV, "text")
    if default_fmt not in ("text", "json"):
        default_fmt = "text"
    parser = argparse.ArgumentParser(prog="dccasp", description="Goal-directed ASP with dynamic consistency checking.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p, choices=("text", "json"), default=default_fmt):
        p.add_argument("--format", choices=choices, default=default if default in choices else "text")

    p = sub.add_parser("analyze", help="report OLON rules, sub-checks and splitting sets")
    p.add_argument("files", nargs="+")
    add_format(p)
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("solve", help="answer a query goal-directedly")
    p.add_argument("files", nargs="+")
    p.add_argument("-q", "--query")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.DCC.value)
    p.add_argument("--full", action="store_true", help="shorthand for --mode full")
    p.add_argument("-n", "--max-answers", type=int, default=1)
    p.add_argument("--step-limit", type=int)
    p.add_argument("--trace", action="store_true", help="print resolution events to stderr")
    p.add_argument("--positives-only", action="store_true")
    add_format(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("enumerate", help="list all answer sets by brute force")
    p.add_argument("files", nargs="+")
    p.add_argument("--atom-limit", type=int, default=DEFAULT_ATOM_LIMIT)
    add_format(p)
    p.set_defaults(func=_cmd_enumerate)

    p = sub.add_parser("bench", help="compare full and dynamic checking on generated programs")
    p.add_argument("--family", action="append", metavar="NAME:k=v,...",
                   help="generator spec; repeat to concatenate (default: the hanoi/pigeons/schur suite)")
    p.add_argument("--query", action="append", help="query atom (repeatable)")
    p.add_argument("--scale", choices=("small", "default"), default="default")
    p.add_argument("--repetitions", type=int, default=5)
    p.add_argument("--step-limit", type=int)
    p.add_argument("--plot", metavar="PATH", help="write a comparison figure (PNG/PDF/SVG)")
    p.add_argument("--rows-json", metavar="PATH", help="also write rows as JSON")
    add_format(p, ("text", "csv", "json"))
    p.set_defaults(func=_cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    for name in ("max_answers", "step_limit", "repetitions", "atom_limit"):
        value = getattr(args, name, None)
        if value is not None and value < 1:
            print(f"error: --{name.replace('_', '-')} must be >= 1", file=sys.stderr)
            return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
