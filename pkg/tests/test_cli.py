import json

import pytest

from legdga import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_dga_unknot(capsys):
    code, out, _ = run(capsys, "dga", "unknot.front", "--json")
    assert code == 0
    rep = json.loads(out)
    assert rep["schema"] == cli.SCHEMA
    assert rep["dga"]["generators"] == [{"name": "r2", "degree": 1, "d": {}}]


def test_dga_946_text(capsys):
    code, out, _ = run(capsys, "dga", "k946.front")
    assert code == 0
    assert "c0  |0|  d = 0" in out.replace("   ", "  ")
    assert "c1" in out


def test_malformed_file(tmp_path, capsys):
    p = tmp_path / "bad.front"
    p.write_text("name: bad\nL1; R2\n")
    code, _, err = run(capsys, "dga", str(p))
    assert code == 2
    assert "line 2" in err
    code, _, err = run(capsys, "dga", str(tmp_path / "missing.front"))
    assert code == 2


def test_augs(capsys):
    code, out, _ = run(capsys, "augs", "trefoil.front", "--field", "2", "--json")
    assert code == 0 and json.loads(out)["count"] == 5


def test_glue_and_spin(capsys):
    code, out, _ = run(capsys, "glue", "glue01.json", "--json")
    gens = {g["name"]: g for g in json.loads(out)["dga"]["generators"]}
    assert code == 0 and gens["c0^"]["d"] == {"": 1}
    code, out, _ = run(capsys, "spin", "spin01.json", "--n", "4", "--json")
    rep = json.loads(out)
    gens = {g["name"]: g for g in rep["dga"]["generators"]}
    assert code == 0 and rep["spin_n"] == 4
    assert gens["a"]["degree"] == 4 and gens["a"]["d"] == {"b~": 1}
    assert gens["c0~"]["degree"] == 4


def test_certify(capsys):
    code, out, _ = run(capsys, "certify", "spin01.json", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "trivial"
    code, out, _ = run(capsys, "certify", "glue11.json", "--json")
    assert json.loads(out)["verdict"] == "nontrivial"


def test_linhom(capsys):
    code, out, _ = run(capsys, "linhom", "k946.front", "--aug", "eps0.json", "--json")
    assert code == 0
    assert json.loads(out)["ranks"] == {"-1": 0, "0": 0, "1": 1}


def test_internal_failure_exit_code(tmp_path, capsys):
    bad = {"name": "broken", "ring": "Z",
           "generators": [{"name": "x", "degree": 0}, {"name": "y", "degree": 1},
                          {"name": "u", "degree": 2}],
           "differential": {"y": {"x": 1}, "u": {"y": 1}}}
    p = tmp_path / "broken.json"
    p.write_text(json.dumps(bad))
    code, _, err = run(capsys, "certify", str(p))
    assert code == 3 and "d^2" in err


def test_reports_are_reproducible(capsys):
    first = run(capsys, "spin", "spin00.json", "--json")[1]
    second = run(capsys, "spin", "spin00.json", "--json")[1]
    assert first == second


@pytest.mark.parametrize("n", [2, 4])
def test_paper(capsys, n):
    code, out, _ = run(capsys, "paper", "--eps0", "eps0.json", "--eps1", "eps1.json",
                       "--n", str(n), "--json")
    assert code == 0
    rep = json.loads(out)
    got = {(tuple(r["pair"]), r["dga"]): r["verdict"] for r in rep["verdicts"]}
    assert got[(("eps0", "eps1"), "spun")] == "trivial"
    assert got[(("eps0", "eps0"), "spun")] == "nontrivial"
    assert got[(("eps1", "eps1"), "glued")] == "nontrivial"
    assert rep["eps0"]["linearized_ranks"]["1"] == 1


def test_paper_with_duplicated_filling(capsys):
    code, out, _ = run(capsys, "paper", "--eps0", "eps0.json", "--eps1", "eps0.json")
    assert code == 1
    assert "MISMATCH" in out
