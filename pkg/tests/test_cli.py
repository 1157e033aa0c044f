"""Command-line interface: JSON output shapes, exit codes, error handling."""

import json

import pytest
from click.testing import CliRunner

from paratope.cli import main


@pytest.fixture()
def runner():
    return CliRunner()


def run_json(runner, args, **kw):
    res = runner.invoke(main, args, **kw)
    assert res.exit_code == 0, res.output
    return json.loads(res.output)


def test_lattice_info(runner):
    doc = run_json(runner, ["lattice", "info", "A2"])
    assert doc["dim"] == 2
    assert doc["det"] == 3
    assert doc["relevant_count"] == 6
    assert len(doc["cosets"]) == 3


def test_lattice_info_rational_output(runner):
    doc = run_json(runner, ["lattice", "info", "E6*"])
    assert doc["det"] == "1/3"


def test_voronoi_build_and_faces(runner):
    doc = run_json(runner, ["voronoi", "build", "A3"])
    assert doc["facet_count"] == 12
    assert doc["vertex_count"] == 14
    doc = run_json(runner, ["voronoi", "faces", "A3", "--min-dim", "1"])
    assert doc["counts"]["1"] == 24
    doc = run_json(runner, ["voronoi", "belts", "A3"])
    assert len(doc["belts"]) == 4
    assert all(b["length"] == 6 for b in doc["belts"])


def test_free_enumerate(runner):
    doc = run_json(runner, ["free", "enumerate", "A3"])
    assert doc["finitely_free"] is True
    assert len(doc["lines"]) == 7
    doc = run_json(runner, ["free", "enumerate", "Z3"])
    assert doc["finitely_free"] is False


def test_zonosum_check_exit_codes(runner, tmp_path):
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"basis": "dual", "vectors": []}))
    res = runner.invoke(main, ["zonosum", "check", "A3", "--generators", str(empty)])
    assert res.exit_code == 0
    assert json.loads(res.output)["is_parallelotope"] is True

    # three coplanar generators of the rhombic dodecahedron fail
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(
        {"basis": "dual",
         "vectors": [[0, 1, 0], [1, -1, 1], [1, 0, -1]]}))
    res = runner.invoke(main, ["zonosum", "check", "A3", "--generators", str(bad)])
    assert res.exit_code == 2
    assert json.loads(res.output)["is_parallelotope"] is False


def test_zonosum_enumerate(runner):
    res = runner.invoke(main, ["zonosum", "enumerate", "A3"])
    assert res.exit_code == 0, res.output
    doc = json.loads(res.output)
    assert len(doc["minimal_forbidden_orbits"]) == 1
    assert len(doc["maximal_feasible_orbits"]) == 1


def test_matroid_classify(runner, tmp_path):
    f = tmp_path / "k4.json"
    rows = [[1, -1, 0, 0], [1, 0, -1, 0], [1, 0, 0, -1],
            [0, 1, -1, 0], [0, 1, 0, -1], [0, 0, 1, -1]]
    f.write_text(json.dumps({"basis": "primal", "vectors": rows}))
    doc = run_json(runner, ["matroid", "classify", str(f)])
    assert doc["unimodular"] is True
    assert doc["label"] == "graphic"
    assert doc["circuit_count"] == 7


def test_symmetry_orbits(runner, tmp_path):
    f = tmp_path / "sq.json"
    f.write_text(json.dumps(
        {"basis": "primal",
         "vectors": [[1, 0], [0, 1], [-1, 0], [0, -1]]}))
    subs = tmp_path / "subs.json"
    subs.write_text(json.dumps([[0, 1], [1, 2]]))
    doc = run_json(runner, ["symmetry", "orbits", str(f),
                            "--subsets", str(subs)])
    assert doc["group_order"] == 8
    canons = {tuple(o["canonical"]) for o in doc["orbits"]}
    assert len(canons) == 1  # adjacent pairs are all equivalent


def test_bad_inputs_exit_one(runner, tmp_path):
    res = runner.invoke(main, ["lattice", "info", "Q5"])
    assert res.exit_code == 1
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    res = runner.invoke(main, ["zonosum", "check", "A3", "--generators", str(f)])
    assert res.exit_code == 1
    g = tmp_path / "badgram.json"
    g.write_text(json.dumps({"gram": [[1, 2], [2, 1]]}))
    res = runner.invoke(main, ["lattice", "info", str(g)])
    assert res.exit_code == 1


def test_rational_vector_input(runner, tmp_path):
    f = tmp_path / "frac.json"
    f.write_text(json.dumps(
        {"basis": "primal", "vectors": [["1/2", "1/2", "-1/2"]]}))
    res = runner.invoke(main, ["zonosum", "check", "A3", "--generators", str(f)])
    assert res.exit_code in (0, 2)  # parsed, decided either way


def test_deterministic_output(runner):
    a = runner.invoke(main, ["voronoi", "belts", "D4"]).output
    b = runner.invoke(main, ["voronoi", "belts", "D4"]).output
    assert a == b


def test_e6_tables_with_saved_enumeration(runner, tmp_path):
    from paratope.e6 import golden_data
    gold = golden_data()
    doc = {
        "group_order": gold["group_order"],
        "minimal_forbidden_orbits": gold["minimal_forbidden"],
        "maximal_feasible_orbits": gold["table2"],
    }
    f = tmp_path / "enum.json"
    f.write_text(json.dumps(doc))
    res = runner.invoke(main, ["e6", "tables", "--enumeration", str(f)])
    assert res.exit_code == 0, res.output
    assert "summary:" in res.output

    # a perturbed enumeration must be flagged with a nonzero exit
    doc["maximal_feasible_orbits"] = [
        dict(r, stabilizer_order=r["stabilizer_order"] + 1)
        for r in gold["table2"]]
    g = tmp_path / "bad_enum.json"
    g.write_text(json.dumps(doc))
    res = runner.invoke(main, ["e6", "tables", "--enumeration", str(g)])
    assert res.exit_code == 3
