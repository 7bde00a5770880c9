import json

import pytest

from dccasp.cli import EXIT_FAILED, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, main

from helpers import EVEN_LOOP, ODD_LOOPS, CHOICE


@pytest.fixture
def write(tmp_path):
    def _write(text, name="prog.lp"):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_solve_choice_a_fails(write, capsys):
    assert main(["solve", write(CHOICE), "-q", "a"]) == EXIT_FAILED
    out, err = capsys.readouterr()
    assert out == ""
    assert "no partial answer set" in err


def test_solve_choice_c(write, capsys):
    assert main(["solve", write(CHOICE), "-q", "c"]) == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert out.startswith("{ c, ")
    assert "not b" in out and "not p" in out


def test_json_and_text_agree(write, capsys):
    path = write(CHOICE)
    main(["solve", path, "-q", "c", "-n", "5"])
    text_lines = capsys.readouterr().out.splitlines()
    main(["solve", path, "-q", "c", "-n", "5", "--format", "json"])
    data = json.loads(capsys.readouterr().out)
    assert data["mode"] == "dcc" and data["query"] == "?- c."
    rendered = ["{ " + ", ".join(a["positives"] + [f"not {n}" for n in a["negatives"]]) + " }"
                for a in data["answers"]]
    assert rendered == text_lines


def test_full_flag(write, capsys):
    assert main(["solve", write(ODD_LOOPS), "-q", "r", "--full", "--format", "json"]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["mode"] == "full"
    assert data["answers"] == [{"positives": ["r"], "negatives": ["p", "q"]}]


def test_positives_only(write, capsys):
    assert main(["solve", write(EVEN_LOOP), "-q", "p", "--positives-only"]) == EXIT_OK
    assert capsys.readouterr().out == "{ p }\n"


def test_embedded_query_and_override(write, capsys):
    path = write(EVEN_LOOP + "?- q.\n")
    assert main(["solve", path]) == EXIT_OK
    assert capsys.readouterr().out == "{ q, not p }\n"
    assert main(["solve", path, "-q", "p"]) == EXIT_OK
    assert capsys.readouterr().out == "{ p, not q }\n"


def test_solve_without_query(write, capsys):
    assert main(["solve", write(EVEN_LOOP)]) == EXIT_USAGE
    assert "query" in capsys.readouterr().err


def test_parse_error(write, capsys):
    assert main(["solve", write("a :- b\n"), "-q", "a"]) == EXIT_USAGE
    assert "prog.lp:" in capsys.readouterr().err


def test_missing_file(capsys):
    assert main(["analyze", "/nonexistent/x.lp"]) == EXIT_USAGE


def test_bad_flags(write):
    path = write(EVEN_LOOP)
    assert main(["solve", path, "-q", "p", "--mode", "lazy"]) == EXIT_USAGE
    assert main(["solve", path, "-q", "p", "-n", "0"]) == EXIT_USAGE
    assert main(["enumerate", path, "-q", "p"]) == EXIT_USAGE
    assert main([]) == EXIT_USAGE


def test_step_limit_exit(write):
    assert main(["solve", write(EVEN_LOOP), "-q", "p", "--step-limit", "1"]) == EXIT_LIMIT


def test_trace_goes_to_stderr(write, capsys):
    main(["solve", write(CHOICE), "-q", "c", "--trace"])
    out, err = capsys.readouterr()
    assert "[call] c" in err and "[activate] chk_6" in err
    assert "[call]" not in out


def test_concatenated_files(write, capsys):
    a = write("a :- not b. b :- not a.", "a.lp")
    b = write("x :- a.", "b.lp")
    assert main(["solve", a, b, "-q", "x"]) == EXIT_OK
    assert capsys.readouterr().out == "{ a, x, not b }\n"


def test_analyze_text(write, capsys):
    assert main(["analyze", write(ODD_LOOPS)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "nmr_check :- chk_1, chk_2, chk_4." in out


def test_analyze_json(write, capsys):
    assert main(["analyze", write(ODD_LOOPS), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["olon_rules"] == [0, 1, 3]


def test_format_env(write, capsys, monkeypatch):
    monkeypatch.setenv("DCCASP_FORMAT", "json")
    assert main(["analyze", write(ODD_LOOPS)]) == EXIT_OK
    json.loads(capsys.readouterr().out)


def test_enumerate_no_models(write, capsys):
    assert main(["enumerate", write("p :- not p.")]) == EXIT_OK
    assert capsys.readouterr().out == ""


def test_enumerate_json(write, capsys):
    assert main(["enumerate", write(EVEN_LOOP), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out) == [["p"], ["q"]]


def test_enumerate_atom_limit(write):
    assert main(["enumerate", write(EVEN_LOOP), "--atom-limit", "1"]) == EXIT_LIMIT


def test_bench_family_with_plot(tmp_path, capsys):
    fig = tmp_path / "bench.png"
    rows = tmp_path / "rows.json"
    code = main(["bench", "--family", "pigeonhole:m=2,n=2", "--family", "schur_like:k=2,n=3",
                 "--repetitions", "1", "--plot", str(fig), "--rows-json", str(rows), "--format", "csv"])
    assert code == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("problem,")
    assert len(out) == 5
    assert fig.read_bytes()[:4] == b"\x89PNG"
    data = json.loads(rows.read_text())
    assert {d["query"] for d in data} == {"c1_solvep", "c2_solves"}


def test_bench_bad_family(capsys):
    assert main(["bench", "--family", "nope:n=1"]) == EXIT_USAGE
    assert main(["bench", "--family", "chain_puzzle:n=x"]) == EXIT_USAGE


def test_bench_step_limit(capsys):
    assert main(["bench", "--family", "pigeonhole:m=2,n=2", "--repetitions", "1", "--step-limit", "3"]) == EXIT_LIMIT


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "dccasp", "--version"], capture_output=True, text=True)
    assert res.returncode == 0 and "0.1.0" in res.stdout
