import copy
import csv
import io
import json

import pytest

from asforge import cli, commands
from asforge.commands import Session, cmd_analyze, cmd_search, cmd_solve, cmd_verify, cmd_zeta
from asforge.config import load_config, parse_config
from asforge.cover import weil_check
from asforge.errors import (AnalyzeOutsideSolutionSpace, BasisMeetsASImage, ConfigError,
                            DimensionMismatch, NotIrreducibleModulus)
from asforge.fplin import gaussian_binomial
from asforge.report import emit

from conftest import config_path, job
from test_rrspace import session


def doc(name):
    with open(config_path(name)) as fh:
        return json.load(fh)


# -- configuration -------------------------------------------------------------

def test_example3_config_resolves():
    j = job("ex3")
    assert j.field.q == 4 and j.curve.genus == 1
    assert repr(j.divisor) == "11*Pinf"


def test_degree4_place_resolves():
    j = job("ex2ii")
    (Q,) = j.divisor.support
    assert Q.degree == 4 and j.divisor[Q] == 3
    assert Q.xplace.poly == (2, 0, 0, 1, 1)


def test_unknown_branch_rejected():
    d = doc("ex1a")
    d["divisor"][1]["branch"] = "ram"
    with pytest.raises(ConfigError, match="divisor/1/branch: the place is not ramified"):
        parse_config(d)
    d["divisor"][1]["branch"] = 7
    with pytest.raises(ConfigError, match="out of range"):
        parse_config(d)
    d = doc("ex1a")
    d["divisor"][1]["x_place"] = [0, 0, 1]
    with pytest.raises(ConfigError, match="irreducible"):
        parse_config(d)


def test_splitting_overlap_rejected():
    d = doc("ex1a")
    d["splitting"] = [{"x_place": "infinite"}]
    with pytest.raises(ConfigError, match="splitting/0"):
        parse_config(d)


def test_schema_errors_are_positional():
    d = doc("ex3")
    d["divisor"][0]["multiplicity"] = 0
    with pytest.raises(ConfigError, match="divisor/0/multiplicity"):
        parse_config(d)
    with pytest.raises(ConfigError, match="line 1"):
        parse_config("{not json")


def test_bad_modulus_rejected():
    d = doc("ex3")
    d["field"]["modulus"] = [1, 0, 1]
    with pytest.raises(NotIrreducibleModulus):
        parse_config(d)


def test_modulus_override_changes_naming_only():
    d = doc("ex3")
    d["field"]["modulus"] = [1, 1, 1]
    assert parse_config(d).curve.genus == 1


def test_config_hash_is_content_addressed():
    a, b = doc("ex3"), doc("ex3")
    assert parse_config(a).config_hash == parse_config(b).config_hash
    b["annotations"]["x"] = "y"
    assert parse_config(a).config_hash != parse_config(b).config_hash


def test_missing_file():
    with pytest.raises(ConfigError):
        load_config("/nonexistent/config.json")


# -- commands ------------------------------------------------------------------

@pytest.mark.parametrize("name,dims", [("ex1a", (5, 3)), ("ex2i", (9, 4)), ("ex3", (13, 5))])
def test_solve_dimensions(name, dims):
    out = cmd_solve(job(name), session=session(name))
    assert (out["dims"]["wtilde"], out["dims"]["fsol"]) == dims
    j = job(name)
    for text in out["fsol"]:
        assert session(name).sol.contains(j.parse(text))


@pytest.mark.parametrize("basis,expected", [("F", (13, 15)), ("H", (29, 25))])
def test_analyze_example1(basis, expected):
    out = cmd_analyze(job("ex1c"), [basis], session=session("ex1c"))
    assert (out["genus"], out["points"]) == expected
    assert out["formula_points"] == out["points"]


def test_analyze_example2_points():
    out = cmd_analyze(job("ex2i"), ["F"], session=session("ex2i"))
    assert out["points"] == 136 and out["r"] == 3
    assert len(out["lines"]) == 13
    assert out["genus"] == 1 + sum(ln["genus"] - 1 for ln in out["lines"])


def test_analyze_outside_solution_space():
    with pytest.raises(AnalyzeOutsideSolutionSpace):
        cmd_analyze(job("ex3"), ["x"], session=session("ex3"))
    out = cmd_analyze(job("ex3"), ["x"], allow_outside=True, session=session("ex3"))
    assert out["r"] == 1
    with pytest.raises(AnalyzeOutsideSolutionSpace, match="not in L"):
        cmd_analyze(job("ex3"), ["x^9"], allow_outside=True, session=session("ex3"))


def test_analyze_rejects_wp_image():
    with pytest.raises(BasisMeetsASImage):
        cmd_analyze(job("ex2ii"), ["printed"], session=session("ex2ii"))
    with pytest.raises(ConfigError, match="dependent"):
        cmd_analyze(job("ex3"), ["f1", "f1"], session=session("ex3"))


def test_search_example2_rows():
    out = cmd_search(job("ex2i"), max_dim=2, session=session("ex2i"))
    pairs = {(r["genus"], r["points"]) for r in out["rows"] if r["r"] == 2}
    assert {(35, 47), (36, 46)} <= pairs
    assert sum(r["r"] == 2 for r in out["rows"]) == gaussian_binomial(4, 2, 3)
    assert all(weil_check(r["genus"], r["points"], 3) for r in out["rows"])


def test_search_example3_pareto():
    out = cmd_search(job("ex3"), max_dim=2, session=session("ex3"))
    assert {"genus": 13, "points": 33} in out["pareto"]
    assert sum(r["r"] == 2 for r in out["rows"]) == gaussian_binomial(5, 2, 2)
    rows = [r for r in out["rows"] if r["r"] == 2 and r["genus"] == 13]
    assert rows and rows[0]["points"] == 33 and rows[0]["weil_ok"]


def test_search_pareto_consistent_with_rows():
    out = cmd_search(job("ex2i"), max_dim=3, session=session("ex2i"))
    best = {}
    for r in out["rows"]:
        best[r["genus"]] = max(best.get(r["genus"], 0), r["points"])
    for pt in out["pareto"]:
        assert best[pt["genus"]] == pt["points"]
        assert not any(g < pt["genus"] and n >= pt["points"] for g, n in best.items())


def test_search_strategies_are_seeded():
    j = job("ex3")
    a = cmd_search(j, max_dim=3, strategy="greedy", seed=4, session=session("ex3"))
    b = cmd_search(j, max_dim=3, strategy="greedy", seed=4, session=session("ex3"))
    assert a["rows"] == b["rows"]
    r = cmd_search(j, max_dim=2, strategy="random", budget=50, seed=1, session=session("ex3"))
    assert all(row["mode"] == "random" for row in r["rows"])


def test_search_determinism_across_threads():
    j = job("ex2i")
    one = emit(cmd_search(j, max_dim=2, session=Session(j, threads=1)), "json")
    four = emit(cmd_search(j, max_dim=2, session=Session(j, threads=4)), "json")
    assert one == four


def test_verify_examples():
    out = cmd_verify(job("ex3"), ["F12"], session=session("ex3"))
    assert (out["affine_census"], out["boundary"], out["total"]) == (32, {"inf": 1}, 33)
    out = cmd_verify(job("ex1a"), ["F"], session=session("ex1a"))
    assert out["census"] == out["expected_census"] == 4 * (5 - 3)
    assert sum(out["boundary"].values()) == 5 and out["total"] == 13


def test_verify_projective_line():
    out = cmd_verify(job("p1_trivial"), ["x"])
    assert out["total"] == 3
    assert out["census"] == 2 and out["boundary"] == {"inf": 1}


def test_zeta_command():
    out = cmd_zeta(job("p1_trivial"), ["x"])
    assert [c["genus_fit"] for c in out["components"]] == [0, 0]


# -- emission ------------------------------------------------------------------

def test_table_row_for_f4():
    out = cmd_analyze(job("ex2i"), ["f4"], session=session("ex2i"))
    text = emit(out, "table")
    assert "\nf4 | 10 | 19\n" in text


def test_empty_search_is_valid():
    d = doc("p1_trivial")
    del d["splitting"]
    j = parse_config(d)
    out = cmd_search(j)
    assert out["rows"] == []
    assert json.loads(emit(out, "json"))["rows"] == []
    assert emit(out, "csv") == "r,basis,genus,points,weil_ok\n"


def test_example3_search_json_row():
    out = json.loads(emit(cmd_search(job("ex3"), max_dim=2, session=session("ex3")), "json"))
    assert any({k: r[k] for k in ("r", "genus", "points", "weil_ok")} ==
               {"r": 2, "genus": 13, "points": 33, "weil_ok": True} for r in out["rows"])


def test_csv_columns():
    out = cmd_analyze(job("ex3"), ["F12"], session=session("ex3"))
    rows = list(csv.DictReader(io.StringIO(emit(out, "csv"))))
    assert list(rows[0]) == ["r", "basis", "genus", "points", "weil_ok"]
    assert rows[-1]["genus"] == "13" and rows[-1]["weil_ok"] == "true"


def test_report_provenance():
    out = cmd_search(job("ex3"), max_dim=1, seed=9, session=session("ex3"))
    prov = out["provenance"]
    assert prov["seed"] == 9 and prov["config_hash"] == job("ex3").config_hash


# -- command line --------------------------------------------------------------

def test_cli_success(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["analyze", "--config", config_path("ex3"), "--basis", "f1,f2",
                     "--format", "json", "--out", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert (data["genus"], data["points"]) == (13, 33)


def test_cli_basis_with_commas_in_parentheses(capsys):
    code = cli.main(["analyze", "--config", config_path("ex1a"), "--basis", "x + x/(x+y), 1+x+y+xy/(x+y)"])
    assert code == 0
    assert "| 10 | 13" in capsys.readouterr().out


def test_cli_config_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"field": {"p": 4}, "curve": {"kind": "rational"}, "divisor": []}')
    assert cli.main(["solve", "--config", str(bad)]) == 2
    assert "config error" in capsys.readouterr().err
    assert cli.main(["analyze", "--config", config_path("ex2ii"), "--basis", "printed"]) == 2


def test_cli_internal_assertion(monkeypatch, capsys):
    def boom(*a, **k):
        raise DimensionMismatch("forced")
    monkeypatch.setattr(commands, "cmd_solve", boom)
    assert cli.main(["solve", "--config", config_path("ex3")]) == 3
    assert "DimensionMismatch" in capsys.readouterr().err


def test_cli_all_commands(capsys):
    for cmd in ("solve", "lspace", "search", "verify"):
        assert cli.main([cmd, "--config", config_path("ex3"), "--basis", "F12"]) == 0
    assert cli.main(["zeta", "--config", config_path("p1_trivial")]) == 0
    assert cli.main(["search", "--config", config_path("ex3"), "--strategy", "exhaustive",
                     "--budget", "10", "--max-dim", "2"]) == 1
