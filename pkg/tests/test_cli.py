import json
import math

import numpy as np
import pytest

from ghdist import cli
from ghdist.demos import contract_demo, density_demo
from ghdist.generators import generate_space, ngon, shortest_path_closure
from ghdist.metric_core import validate_space
from ghdist.spacefile import SpaceFileError, dumps_space, load_space, parse_space, save_space

from conftest import points_on_line, two_points


@pytest.fixture
def spaces(tmp_path):
    paths = {}
    for name, X in {"two1": two_points(1), "two3": two_points(3), "line": points_on_line(0, 1, 3)}.items():
        paths[name] = tmp_path / f"{name}.space"
        save_space(X, paths[name])
    return paths


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip().startswith("{") else out), err


def test_space_file_roundtrip(tmp_path, line013):
    save_space(line013, tmp_path / "a.space")
    back = load_space(tmp_path / "a.space")
    assert back == line013 and back.labels == line013.labels
    assert parse_space(dumps_space(line013)) == line013


def test_space_file_default_labels():
    X = parse_space('{"n": 2, "dist": [[0, 1], [1, 0]]}')
    assert X.labels == ("p0", "p1")


@pytest.mark.parametrize("text, line, fragment", [
    ('{"n": 2,\n "dist": [[0, 1],\n  [1, 0]\n', 4, ""),
    ('{"n": 0,\n "dist": []}', 1, "positive integer"),
    ('{"n": 2,\n "dist": [[0, 1]]}', 2, "2x2"),
    ('{"n": 2,\n "dist": [\n  [0, 1],\n  [1, "x"]]}', 4, "not a number"),
    ('{"n": 3,\n "dist": [\n  [0, 1, 4],\n  [1, 0, 1],\n  [4, 1, 0]]}', 3, "triangle"),
    ('{"n": 2,\n "dist": [\n  [0, 1],\n  [2, 0]]}', 3, "symmetr"),
    ('{"n": 2,\n "dist": [\n  [0, 1],\n  [1, 0]],\n "labels": ["a"]}', 5, "labels"),
])
def test_space_file_errors_carry_lines(text, line, fragment):
    with pytest.raises(SpaceFileError) as err:
        parse_space(text, "bad.space")
    assert err.value.line == line
    assert fragment in str(err.value).lower()
    assert str(err.value).startswith(f"bad.space:{line}:")


def test_missing_file(tmp_path):
    with pytest.raises(SpaceFileError):
        load_space(tmp_path / "nope.space")


def test_generators():
    assert np.all(generate_space("simplex", 3).dist[~np.eye(3, dtype=bool)] == 1)
    C4 = ngon(4)
    assert set(np.round(C4.dist[~np.eye(4, dtype=bool)], 12)) == {round(math.pi / 2, 12), round(math.pi, 12)}
    assert ngon(4, chord=True).dist[0, 2] == pytest.approx(2)
    assert generate_space("line", 4).dist[0, 3] == 3
    for seed in range(30):
        X = generate_space("random", 7, seed)
        validate_space(X.dist)
        assert X.dist.max() <= 1
    assert generate_space("random", 5, 3) == generate_space("random", 5, 3)
    with pytest.raises(ValueError):
        generate_space("torus", 3)
    with pytest.raises(ValueError):
        generate_space("line", 0)


def test_shortest_path_closure_repairs():
    d = np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0]], dtype=float)
    assert shortest_path_closure(d)[0, 2] == 2


def test_dist_exact_and_lower(capsys, spaces):
    code, rep, _ = run(capsys, "dist", "exact", spaces["two1"], spaces["two3"])
    assert code == 0 and rep["result"]["value"] == 1
    assert rep["result"]["certificate"] and rep["command"][:2] == ["dist", "exact"]
    code, rep, _ = run(capsys, "dist", "exact", spaces["line"], spaces["line"])
    assert code == 0 and rep["result"]["value"] == 0
    code, rep, _ = run(capsys, "dist", "lower", spaces["two1"], spaces["two3"])
    assert code == 0 and rep["result"]["value"] == 1


@pytest.mark.parametrize("kind, value", [("oracle", 1), ("edwards", 2), ("hat", 2), ("embed-bound", 1)])
def test_dist_other_kinds(capsys, spaces, kind, value):
    code, rep, _ = run(capsys, "dist", kind, spaces["two1"], spaces["two3"])
    assert code == 0
    assert rep["result"]["value"] == pytest.approx(value, abs=1e-6)


def test_dist_invalid_input_exits_2(capsys, tmp_path, spaces):
    bad = tmp_path / "bad.space"
    bad.write_text('{"n": 3,\n "dist": [\n  [0, 1, 4],\n  [1, 0, 1],\n  [4, 1, 0]]}')
    code, _, err = run(capsys, "dist", "exact", bad, spaces["two1"])
    assert code == 2 and "bad.space:3" in err
    code, _, _ = run(capsys, "dist", "exact", tmp_path / "missing.space", spaces["two1"])
    assert code == 2


def test_dist_oracle_too_large_exits_2(capsys, tmp_path):
    for name in ("a", "b"):
        save_space(generate_space("random", 6, 1), tmp_path / f"{name}.space")
    code, _, _ = run(capsys, "dist", "oracle", tmp_path / "a.space", tmp_path / "b.space")
    assert code == 2


def test_dist_budget_exits_3(capsys, tmp_path):
    save_space(generate_space("random", 9, 5), tmp_path / "a.space")
    save_space(generate_space("random", 9, 6), tmp_path / "b.space")
    code, rep, _ = run(capsys, "dist", "exact", tmp_path / "a.space", tmp_path / "b.space", "--budget", 5)
    assert code == 3
    res = rep["result"]
    assert res["truncated"] and res["lower_bound"] <= res["upper_bound"]


def test_dist_tolerance_flag(capsys, tmp_path, spaces):
    near = tmp_path / "near.space"
    near.write_text('{"n": 3, "dist": [[0, 1, 2.001], [1, 0, 1], [2.001, 1, 0]]}')
    assert run(capsys, "dist", "lower", near, spaces["two1"])[0] == 2
    code, rep, _ = run(capsys, "dist", "lower", near, spaces["two1"], "--tol", 0.01)
    assert code == 0


def test_reports_are_deterministic(capsys, spaces, tmp_path):
    def strip(rep):
        rep.pop("wall_time")
        return rep
    a = strip(run(capsys, "dist", "embed-bound", spaces["line"], spaces["two3"], "--seed", 4)[1])
    b = strip(run(capsys, "dist", "embed-bound", spaces["line"], spaces["two3"], "--seed", 4)[1])
    assert a == b
    run(capsys, "dist", "exact", spaces["line"], spaces["two3"], "--out", tmp_path / "o1")
    run(capsys, "dist", "exact", spaces["line"], spaces["two3"], "--out", tmp_path / "o2")
    r1 = strip(json.loads((tmp_path / "o1" / "report.json").read_text()))
    r2 = strip(json.loads((tmp_path / "o2" / "report.json").read_text()))
    assert r1 == r2
    assert load_space(tmp_path / "o1" / "X.space") == load_space(spaces["line"])


@pytest.mark.parametrize("suite", ["metric-axioms", "admissible", "eps-isometry", "edwards-ineq",
                                   "geodesic", "embedding", "oracle", "thm3", "thm6"])
def test_verify_suites_pass(capsys, suite):
    code, rep, err = run(capsys, "verify", suite, "--trials", 3)
    assert code == 0
    assert rep["result"]["passed"]
    assert err.startswith("PASS")


def test_verify_failure_exits_1(capsys, monkeypatch):
    from ghdist import suites

    def broken(seed=1, trials=1):
        rep = suites.SuiteReport("geodesic", seed, trials)
        rep.add("always fails", False, witness=[0, 1])
        return rep
    monkeypatch.setitem(suites.SUITES, "geodesic", broken)
    code, rep, err = run(capsys, "verify", "geodesic")
    assert code == 1 and "FAIL" in err
    assert rep["result"]["failures"][0]["witness"] == {"witness": [0, 1]}


def test_generate_command(capsys, tmp_path):
    assert cli.main(["generate", "ngon", "-n", "6", "-o", str(tmp_path / "c6.space")]) == 0
    assert load_space(tmp_path / "c6.space") == ngon(6)
    assert cli.main(["generate", "random", "-n", "4", "--seed", "2"]) == 0
    assert parse_space(capsys.readouterr().out) == generate_space("random", 4, 2)


def test_demo_contract(capsys, tmp_path):
    code, rep, _ = run(capsys, "demo", "contract", "-n", 4, "--out", tmp_path)
    assert code == 0
    rows = rep["result"]["rows"]
    assert rows[0]["lambda"] == 0 and rows[0]["to_point"] == 0
    assert all(r["to_point"] == r["expected_to_point"] for r in rows)
    # every table row is recomputable from the shipped spaces
    base = load_space(tmp_path / "base.space")
    from ghdist.correspondences import gh_exact
    from ghdist.metric_core import one_point_space
    for r in rows[1:]:
        S = load_space(tmp_path / f"scaled_{r['lambda']:g}.space")
        assert gh_exact(S, one_point_space()).value == r["to_point"]
        assert gh_exact(S, base).value == r["to_X"]


def test_demo_density_small(capsys, tmp_path):
    code, rep, _ = run(capsys, "demo", "density", "--max-n", 16, "--out", tmp_path)
    assert code == 0
    rows = rep["result"]["rows"]
    assert [r["n"] for r in rows] == [4, 8]
    assert rows[0]["upper_bound"] <= math.pi / 4 + 1e-12
    assert rep["result"]["monotone_upper_bound"]
    assert (tmp_path / "C16.space").exists()


def test_contract_demo_function(line013):
    res = contract_demo(line013, [0.0, 0.5, 3.0])
    assert res["to_point_exact"] and res["to_X_matches"]


def test_density_demo_function():
    res = density_demo([4, 8])
    assert [r["exact"] for r in res["rows"]] == pytest.approx([math.pi / 8, math.pi / 16])
