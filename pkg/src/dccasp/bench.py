"""Program families and an instrumented full-vs-dcc comparison harness."""

from __future__ import annotations

import csv
import io
import json
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Mapping, Optional, Sequence

from .analysis import analyze
from .engine import Mode, SolveConfig, SolveStats, Solver, StepLimitExceeded
from .syntax import Program, concat_programs, parse_program, parse_query, rename_atoms


class UnknownFamily(ValueError):
    pass


def _pigeonhole(m: int, n: int) -> str:
    if m < 1 or n < 1:
        raise ValueError("pigeonhole needs m, n >= 1")
    out = [f"% {m} pigeons, {n} holes"]
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            out.append(f"in({i},{j}) :- not out({i},{j}).")
            out.append(f"out({i},{j}) :- not in({i},{j}).")
            out.append(f"placed({i}) :- in({i},{j}).")
        out.append(f":- not placed({i}).")
        for j in range(1, n + 1):
            for l in range(j + 1, n + 1):
                out.append(f":- in({i},{j}), in({i},{l}).")
    for j in range(1, n + 1):
        for i in range(1, m + 1):
            for k in range(i + 1, m + 1):
                out.append(f":- in({i},{j}), in({k},{j}).")
    out.append("solvep :- " + ", ".join(f"placed({i})" for i in range(1, m + 1)) + ".")
    return "\n".join(out) + "\n"


def _schur_like(k: int, n: int) -> str:
    if k < 1 or n < 1:
        raise ValueError("schur_like needs k, n >= 1")
    out = [f"% numbers 1..{n} into {k} sum-free parts"]
    for x in range(1, n + 1):
        for p in range(1, k + 1):
            out.append(f"part({x},{p}) :- not other({x},{p}).")
            out.append(f"other({x},{p}) :- not part({x},{p}).")
            out.append(f"assigned({x}) :- part({x},{p}).")
        out.append(f":- not assigned({x}).")
        for p in range(1, k + 1):
            for q in range(p + 1, k + 1):
                out.append(f":- part({x},{p}), part({x},{q}).")
    for p in range(1, k + 1):
        for x in range(1, n + 1):
            for y in range(x, n + 1 - x):
                out.append(f":- part({x},{p}), part({y},{p}), part({x + y},{p}).")
    out.append("solves :- " + ", ".join(f"assigned({x})" for x in range(1, n + 1)) + ".")
    return "\n".join(out) + "\n"


def _chain_puzzle(n: int) -> str:
    """An n-step move sequence; every step picks one of two moves, only one
    of which is legal. Contains no odd loops and no constraints."""
    if n < 1:
        raise ValueError("chain_puzzle needs n >= 1")
    out = [f"% {n}-step chain", "at(0)."]
    for i in range(1, n + 1):
        legal = "b" if i % 3 == 0 else "a"
        out.append(f"at({i}) :- move({i},a), legal({i},a), at({i - 1}).")
        out.append(f"at({i}) :- move({i},b), legal({i},b), at({i - 1}).")
        out.append(f"move({i},a) :- not move({i},b).")
        out.append(f"move({i},b) :- not move({i},a).")
        out.append(f"legal({i},{legal}).")
    out.append(f"solveh :- at({n}).")
    return "\n".join(out) + "\n"


_FAMILIES = {
    "pigeonhole": (_pigeonhole, ("m", "n")),
    "schur_like": (_schur_like, ("k", "n")),
    "chain_puzzle": (_chain_puzzle, ("n",)),
}

QUERY_ATOM = {"pigeonhole": "solvep", "schur_like": "solves", "chain_puzzle": "solveh"}


def generate_family(name: str, params: Optional[Mapping[str, Any]] = None) -> Program:
    """Build a grounded program of the named family.

    ``concat`` takes ``parts``, a list of ``(name, params)`` pairs; atoms of
    part ``i`` get the prefix ``c{i}_`` so the parts share no atoms.
    """
    params = dict(params or {})
    if name == "concat":
        parts = params.pop("parts", None)
        if not parts or params:
            raise ValueError("concat takes exactly one parameter, a non-empty 'parts' list")
        progs = [rename_atoms(generate_family(n, p), f"c{i + 1}_") for i, (n, p) in enumerate(parts)]
        return concat_programs(progs)
    if name not in _FAMILIES:
        raise UnknownFamily(f"unknown family {name!r}")
    fn, keys = _FAMILIES[name]
    if set(params) != set(keys):
        raise ValueError(f"{name} takes parameters {', '.join(keys)}")
    return parse_program(fn(*(int(params[k]) for k in keys)))


@dataclass(frozen=True)
class BenchSpec:
    problem: str
    family: str
    params: Mapping[str, Any]
    queries: Sequence[tuple[str, str]]  # (query name, query text)
    modes: Sequence[Mode] = (Mode.FULL, Mode.DCC)
    repetitions: int = 5
    step_limit: Optional[int] = None

    def __post_init__(self):
        if self.repetitions < 1:
            raise ValueError("repetitions must be >= 1")


@dataclass
class BenchRow:
    problem: str
    splitting_sets_total: int
    splitting_sets_touched: int
    query: str
    mode: str
    wall_time: float
    subcheck_invocations: int
    resolution_steps: int
    succeeded: bool
    step_limit_hit: bool = False
    times: list = field(default_factory=list, repr=False)


def run_bench(spec: BenchSpec) -> list[BenchRow]:
    program = generate_family(spec.family, spec.params)
    rows = []
    for qname, qtext in spec.queries:
        query, prog = parse_query(qtext, program)
        cp, part = analyze(prog)
        solver = Solver(cp, part)
        for mode in spec.modes:
            mode = Mode(mode)
            cfg = SolveConfig(mode, step_limit=spec.step_limit)
            times = []
            stats = SolveStats()
            answers = []
            hit = False
            for _ in range(spec.repetitions):
                stats = SolveStats()
                t0 = time.perf_counter()
                try:
                    answers = solver.solve(query, cfg, stats=stats)
                except StepLimitExceeded:
                    hit = True
                    answers = []
                times.append(time.perf_counter() - t0)
            touched = set()
            for ans in answers:
                for name in ans.positives | ans.negatives:
                    k = part.set_of(prog.atom_id(name))
                    if k is not None:
                        touched.add(k)
            rows.append(BenchRow(
                problem=spec.problem,
                splitting_sets_total=len(part.sets),
                splitting_sets_touched=len(touched),
                query=qname,
                mode=mode.value,
                wall_time=statistics.median(times),
                subcheck_invocations=stats.subcheck_invocations,
                resolution_steps=stats.resolution_steps,
                succeeded=bool(answers),
                step_limit_hit=hit,
                times=times,
            ))
    rows.sort(key=lambda r: (r.problem, r.query, r.mode))
    return rows


def suite_specs(repetitions: int = 5, scale: str = "default", step_limit: Optional[int] = 2_000_000) -> list[BenchSpec]:
    """Splitting-set profile of the hanoi / pigeons / schur combinations."""
    sizes = {
        "small": {"chain": 60, "pig": (2, 2), "sch": (2, 4)},
        "default": {"chain": 400, "pig": (2, 3), "sch": (3, 4)},
    }[scale]
    chain = ("chain_puzzle", {"n": sizes["chain"]})
    pig = ("pigeonhole", dict(zip("mn", sizes["pig"])))
    sch = ("schur_like", dict(zip("kn", sizes["sch"])))
    label = {
        "chain_puzzle": f"hanoi-{sizes['chain']}",
        "pigeonhole": "pigeons-{}x{}".format(*sizes["pig"]),
        "schur_like": "schur-{}x{}".format(*sizes["sch"]),
    }
    short = {"chain_puzzle": "hanoi", "pigeonhole": "pigeons", "schur_like": "schur"}
    specs = []
    for fam in (chain, pig, sch):
        q = QUERY_ATOM[fam[0]]
        specs.append(BenchSpec(label[fam[0]], fam[0], fam[1], [(q, q)], repetitions=repetitions,
                               step_limit=step_limit))
    for combo in ((chain, sch), (chain, pig), (pig, sch), (chain, pig, sch)):
        name = "-".join(short[f[0]] for f in combo)
        queries = [(QUERY_ATOM[f[0]], f"c{i + 1}_{QUERY_ATOM[f[0]]}") for i, f in enumerate(combo)]
        specs.append(BenchSpec(name, "concat", {"parts": list(combo)}, queries, repetitions=repetitions,
                               step_limit=step_limit))
    return specs


_COLUMNS = ("problem", "splitting_sets_total", "splitting_sets_touched", "query", "mode",
            "wall_time", "subcheck_invocations", "resolution_steps", "succeeded", "step_limit_hit")
_HEADERS = ("Problem", "Sets", "Touched", "Query", "Mode", "Time (s)", "Sub-checks", "Steps", "OK", "Limit")


def format_rows(rows: Sequence[BenchRow], fmt: str = "text") -> str:
    records = [{c: getattr(r, c) for c in _COLUMNS} for r in rows]
    if fmt == "json":
        return json.dumps(records, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(records)
        return buf.getvalue()
    cells = [list(_HEADERS)]
    for r in records:
        cells.append([
            r["problem"], str(r["splitting_sets_total"]), str(r["splitting_sets_touched"]), r["query"],
            r["mode"], f"{r['wall_time']:.4f}", str(r["subcheck_invocations"]), str(r["resolution_steps"]),
            "yes" if r["succeeded"] else "no", "hit" if r["step_limit_hit"] else "",
        ])
    widths = [max(len(row[i]) for row in cells) for i in range(len(_HEADERS))]
    numeric = {1, 2, 5, 6, 7}
    lines = []
    for n, row in enumerate(cells):
        parts = [c.rjust(w) if i in numeric and n else c.ljust(w) for i, (c, w) in enumerate(zip(row, widths))]
        lines.append("  ".join(parts).rstrip())
        if n == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines) + "\n"


def rows_to_dicts(rows: Sequence[BenchRow]) -> list[dict]:
    return [{k: v for k, v in asdict(r).items() if k != "times"} for r in rows]
