import csv
import io
import json

import pytest

from dccasp.analysis import analyze
from dccasp.bench import (
    BenchSpec,
    UnknownFamily,
    format_rows,
    generate_family,
    rows_to_dicts,
    run_bench,
    suite_specs,
)
from dccasp.engine import SolveConfig, SolveStats, Solver
from dccasp.oracle import enumerate_answer_sets
from dccasp.syntax import parse_query


def counts(program, query, mode):
    q, program = parse_query(query, program)
    cp, part = analyze(program)
    stats = SolveStats()
    answers = Solver(cp, part).solve(q, SolveConfig(mode), stats=stats)
    return answers, stats


def test_pigeonhole_shape():
    p = generate_family("pigeonhole", {"m": 3, "n": 3})
    cp, part = analyze(p)
    assert len(part.sets) == 1
    assert len(cp.subchecks) == 21


def test_schur_shape():
    p = generate_family("schur_like", {"k": 2, "n": 4})
    cp, part = analyze(p)
    assert len(part.sets) == 1
    assert len(cp.subchecks) == 16


def test_chain_is_olon_free():
    p = generate_family("chain_puzzle", {"n": 20})
    cp, part = analyze(p)
    assert cp.subchecks == () and part.sets == ()


@pytest.mark.parametrize("family, params", [
    ("pigeonhole", {"m": 2, "n": 2}),
    ("schur_like", {"k": 2, "n": 4}),
    ("schur_like", {"k": 1, "n": 2}),
    ("chain_puzzle", {"n": 4}),
])
def test_small_instances_agree_with_oracle(family, params):
    from dccasp.bench import QUERY_ATOM

    p = generate_family(family, params)
    models = enumerate_answer_sets(p, atom_limit=40) if len(p.atoms) <= 18 else None
    for mode in ("dcc", "full"):
        answers, _ = counts(p, QUERY_ATOM[family], mode)
        if models is not None:
            assert bool(answers) == any(QUERY_ATOM[family] in m.names for m in models)


def test_pigeonhole_unsat_fails():
    p = generate_family("pigeonhole", {"m": 3, "n": 2})
    for mode in ("dcc", "full"):
        answers, _ = counts(p, "solvep", mode)
        assert answers == []


def test_concat_prefixes_and_sets():
    p = generate_family("concat", {"parts": [("pigeonhole", {"m": 2, "n": 2}), ("schur_like", {"k": 2, "n": 3})]})
    assert all(n.startswith(("c1_", "c2_")) for n in p.atoms)
    _, part = analyze(p)
    assert len(part.sets) == 2


def test_concat_component_query_matches_standalone():
    pig = ("pigeonhole", {"m": 2, "n": 3})
    sch = ("schur_like", {"k": 3, "n": 4})
    both = generate_family("concat", {"parts": [pig, sch]})
    alone, s_alone = counts(generate_family(*pig), "solvep", "dcc")
    joined, s_joined = counts(both, "c1_solvep", "dcc")
    assert s_joined.subcheck_invocations == s_alone.subcheck_invocations
    assert s_joined.resolution_steps == s_alone.resolution_steps
    assert [a.positives for a in joined] == [{f"c1_{n}" for n in a.positives} for a in alone]


@pytest.mark.parametrize("name, params", [
    ("nope", {}),
    ("pigeonhole", {"m": 2}),
    ("chain_puzzle", {"n": 0}),
    ("concat", {}),
])
def test_bad_family(name, params):
    with pytest.raises(ValueError):
        generate_family(name, params)


def test_unknown_family_type():
    with pytest.raises(UnknownFamily):
        generate_family("nope")


def test_run_bench_rows():
    spec = BenchSpec("pig", "pigeonhole", {"m": 2, "n": 2}, [("solvep", "solvep")], repetitions=3)
    rows = run_bench(spec)
    assert [(r.problem, r.query, r.mode) for r in rows] == [("pig", "solvep", "dcc"), ("pig", "solvep", "full")]
    for r in rows:
        assert r.succeeded and not r.step_limit_hit
        assert len(r.times) == 3
        assert r.splitting_sets_total == 1 and r.splitting_sets_touched == 1
        assert r.subcheck_invocations > 0


def test_run_bench_step_limit_reported():
    spec = BenchSpec("pig", "pigeonhole", {"m": 2, "n": 2}, [("solvep", "solvep")], repetitions=1, step_limit=5)
    assert all(r.step_limit_hit and not r.succeeded for r in run_bench(spec))


def test_spec_validation():
    with pytest.raises(ValueError):
        BenchSpec("x", "pigeonhole", {}, [], repetitions=0)


def test_suite_specs_shape():
    specs = suite_specs(scale="small")
    assert [s.problem for s in specs] == [
        "hanoi-60", "pigeons-2x2", "schur-2x4",
        "hanoi-schur", "hanoi-pigeons", "pigeons-schur", "hanoi-pigeons-schur",
    ]
    assert specs[-1].queries == [("solveh", "c1_solveh"), ("solvep", "c2_solvep"), ("solves", "c3_solves")]


def test_formats():
    spec = BenchSpec("pig", "pigeonhole", {"m": 2, "n": 2}, [("solvep", "solvep")], repetitions=1)
    rows = run_bench(spec)
    text = format_rows(rows)
    assert text.splitlines()[0].split()[:3] == ["Problem", "Sets", "Touched"]
    assert len(text.splitlines()) == 4
    records = list(csv.DictReader(io.StringIO(format_rows(rows, "csv"))))
    assert [r["mode"] for r in records] == ["dcc", "full"]
    data = json.loads(format_rows(rows, "json"))
    assert data == [{k: v for k, v in d.items() if k != "times"} for d in rows_to_dicts(rows)]


def test_plot_writes_file(tmp_path):
    from dccasp.plotting import plot_rows

    rows = run_bench(BenchSpec("pig", "pigeonhole", {"m": 2, "n": 2}, [("solvep", "solvep")], repetitions=1))
    out = tmp_path / "fig.png"
    plot_rows(rows, str(out))
    assert out.stat().st_size > 1000
    assert out.read_bytes()[:4] == b"\x89PNG"
