import json
from importlib import resources

import jsonschema
import pytest
from hypothesis import given, strategies as st

from quasirandom import cli
from quasirandom.errors import InputError
from quasirandom.specs import GroupSpec, parse_group_spec, parse_subset_spec, SpecError

SCHEMA = json.loads(resources.files("quasirandom").joinpath("report-schema.json").read_text())


def run_ok(*argv):
    doc, text, code = cli.run(list(argv))
    assert code == 0, argv
    jsonschema.validate(doc, SCHEMA)
    assert json.loads(text) == doc
    return doc


# specs ------------------------------------------------------------------------


def test_group_spec_examples(tmp_path):
    s = parse_group_spec("PSL(2,7)")
    assert s == GroupSpec("PSL", (2, 7)) and str(s) == "PSL(2,7)"
    assert parse_group_spec(" alt( 5 ) ") == GroupSpec("Alt", (5,))
    assert parse_group_spec("Q8") == GroupSpec("Q8", ())
    path = tmp_path / "k4.txt"
    path.write_text("4\n0 1 2 3\n1 0 3 2\n2 3 0 1\n3 2 1 0\n")
    spec = parse_group_spec(f"table:{path}")
    assert spec.build().n == 4


@pytest.mark.parametrize("text,pos", [("PSL(2,6)", None), ("PSL(2", 5), ("Foo(3)", 0),
                                      ("C(3) x", 5), ("PSL(2,7,1)", 0), ("C(a)", 2), ("", 0)])
def test_group_spec_errors(text, pos):
    with pytest.raises(InputError) as err:
        parse_group_spec(text)
    if pos is not None:
        assert isinstance(err.value, SpecError) and err.value.pos == pos


families = st.sampled_from(["PSL", "SL", "SU", "PSU", "GL", "Alt", "Sym", "C", "D", "Q8"])
prime_powers = st.sampled_from([2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27, 32])


@given(families, st.integers(1, 12), prime_powers)
def test_group_spec_roundtrip(family, a, q):
    params = {2: (a, q), 1: (a,), 0: ()}[{"Q8": 0, "Alt": 1, "Sym": 1, "C": 1, "D": 1}.get(family, 2)]
    spec = GroupSpec(family, params)
    assert parse_group_spec(str(spec)) == spec
    assert str(parse_group_spec(str(spec))) == str(spec)


@pytest.mark.parametrize("text", ["1,2,3", "random:117:42", "random:2-160", "symrandom:40",
                                  "coset:1,2:5", "all", "empty", "gens", "symrandom:3-9:7"])
def test_subset_spec_roundtrip(text):
    spec = parse_subset_spec(text)
    assert parse_subset_spec(str(spec)) == spec


@pytest.mark.parametrize("text", ["random:", "random:x", "random:9-3", "1,a", "coset:1:x",
                                  "random:1:2:3"])
def test_subset_spec_errors(text):
    with pytest.raises(InputError):
        parse_subset_spec(text)


# commands -----------------------------------------------------------------------


def test_describe_trivial_group():
    doc = run_ok("describe", "C(1)")
    assert doc["results"]["order"] == 1 and doc["results"]["classes"] == 1


def test_k_report():
    doc = run_ok("k", "PSL(2,7)")
    assert doc["results"]["k"] == 3 and doc["subcommand"] == "k"
    assert doc["provenance"]["seed"] == 0


def test_cover_example():
    doc = run_ok("cover", "PSL(2,7)", "random:117:42")
    res = doc["results"]
    assert res["covers"] and 116.4 < res["threshold"] < 116.5


def test_chartab_json_and_tsv(tmp_path):
    doc = run_ok("chartab", "Alt(5)")
    assert sorted(doc["results"]["degrees"]) == [1, 3, 3, 4, 5]
    _, text, code = cli.run(["chartab", "Alt(5)", "--format", "tsv"])
    assert code == 0 and text.startswith("char\t")
    out = tmp_path / "t.tsv"
    _, text, code = cli.run(["chartab", "Alt(5)", "--format", "tsv", "--out", str(out)])
    assert code == 0 and text is None and out.read_text().startswith("char\t")


@pytest.mark.parametrize("argv", [
    ["mix", "PSL(2,7)", "symrandom:40:1", "--trials", "3"],
    ["mix", "PSL(2,7)", "symrandom:30", "--A", "random:100", "--C", "random:100", "--certify"],
    ["mix", "Alt(5)", "all", "--matrix-free"],
    ["productfree", "Alt(4)", "--restarts", "4", "--exact"],
    ["profile", "Alt(5)", "--trials", "5", "--restarts", "4"],
    ["minindex", "PSL(2,7)"],
    ["growth", "PSL(2,5)", "gens"],
    ["fpf", "Alt(5)"],
    ["word", "values", "Alt(5)", "x1^2", "[x1,x2]"],
    ["word", "values", "PSL(2,7)", "x1^2", "--mode", "sampled", "--samples", "5000"],
    ["word", "waring", "PSL(2,7)", "x1^2", "--sparse-trials", "3", "--distinct"],
    ["word", "rs", "SL(2,5)"],
    ["word", "rs", "SL(4,3)", "--samples", "2000"],
    ["word", "genprob", "PSL(2,7)", "x1^2", "--trials", "20"],
    ["describe", "SL(4,3)"],
    ["cover", "C(6)", "coset:2:0"],
])
def test_reports_validate(argv):
    doc = run_ok(*argv)
    assert doc["subcommand"] == " ".join(argv[:2]) if argv[0] == "word" else argv[0]


def test_main_writes_json(capsys):
    assert cli.main(["k", "Alt(5)"]) == 0
    assert json.loads(capsys.readouterr().out)["results"]["k"] == 3


@pytest.mark.parametrize("argv,code", [
    (["k", "PSL(2,6)"], 2),
    (["mix", "C(4)", "1"], 2),
    (["word", "values", "Alt(5)", "x1 x1^-1"], 2),
    (["word", "values", "Alt(5)", "x1 ^"], 2),
    (["cover", "Alt(5)", "61"], 2),
    (["k", "C(1)"], 2),
    (["k", "Alt(5)", "--workers", "0"], 2),
    (["describe", "table:/nonexistent/k4.txt"], 2),
    (["cover", "Alt(5)", "all", "--format", "tsv"], 2),
    (["k", "SL(4,3)"], 3),
    (["mix", "PSL(2,7)", "all", "--cap-enum", "100"], 3),
    (["word", "rs", "SL(4,3)", "--mode", "exact"], 3),
])
def test_exit_codes(argv, code, capsys):
    doc, text, got = cli.run(argv)
    assert got == code and doc is None and text is None
    assert capsys.readouterr().err.startswith("error:")


def test_theorem_violation_exits_4(monkeypatch, capsys):
    # pretend k is huge so that a non-covering set lies above the threshold
    monkeypatch.setattr(cli.ch, "min_nontrivial_degree", lambda G: 1000)
    _, _, code = cli.run(["cover", "C(6)", "0"])
    assert code == 4
    assert "error:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    ["mix", "PSL(2,7)", "symrandom:2-160", "--trials", "6"],
    ["cover", "PSL(2,7)", "random:117", "--trials", "5"],
    ["productfree", "PSL(2,7)", "--restarts", "6"],
    ["word", "genprob", "PSL(2,7)", "x1^2", "--trials", "30"],
    ["profile", "Alt(5)", "--trials", "4", "--restarts", "3"],
])
def test_byte_identical_across_workers(argv):
    outs = {cli.run(argv + ["--seed", "5", "--workers", str(w)])[1] for w in (1, 2, 4)}
    assert len(outs) == 1


def test_seed_changes_random_results():
    a, b = (cli.run(["mix", "PSL(2,7)", "symrandom:40", "--seed", s])[0]["results"] for s in "12")
    assert a["runs"][0]["spectral"]["max_abs_ideal"] != b["runs"][0]["spectral"]["max_abs_ideal"]


def test_flags_before_subcommand():
    doc = run_ok("--seed", "7", "k", "Alt(5)")
    assert doc["provenance"]["seed"] == 7
