"""Tests for the graphmetric command line."""

import json
import math

import numpy as np
import pytest

from app.cli import EXIT_OK, EXIT_USAGE, EXIT_VERIFY_FAILED, run
from app.models.graph import GraphKind
from app.services.digraph import generate
from app.services.export import parse_csv_counts
from app.services.graph_io import read_graph


@pytest.fixture
def k2_file(graph_file):
    return graph_file(generate(GraphKind.COMPLETE, 2), "k2.json")


def test_generate_to_stdout(capsys):
    assert run(["generate", "--kind", "complete", "--n", "3"]) == EXIT_OK
    document = json.loads(capsys.readouterr().out)
    assert document["n"] == 3
    assert len(document["edges"]) == 6


def test_generate_to_file_with_closure(tmp_path):
    out = tmp_path / "chain.json"
    assert run(["generate", "--kind", "chain", "--n", "4", "--closure", "--out", str(out)]) == EXIT_OK
    assert len(read_graph(out).edges) == 6


def test_generate_watts_strogatz_seeded(tmp_path):
    args = ["generate", "--kind", "watts_strogatz", "--n", "32", "--k", "4", "--beta", "0.3"]
    run(args + ["--seed", "5", "--out", str(tmp_path / "a.json")])
    run(["--seed", "5"] + args + ["--out", str(tmp_path / "b.json")])
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_dist(capsys, k2_file, points_file):
    points = points_file(np.array([[0, 0], [0, 0], [0, 0], [1, 1]]))
    assert run(["dist", "--graph", str(k2_file), "--points", str(points)]) == EXIT_OK
    values = [float(line) for line in capsys.readouterr().out.split()]
    assert values[0] == 0.0
    assert values[1] == pytest.approx(0.75)


def test_dist_json(capsys, k2_file, points_file):
    points = points_file(np.array([[0, 0], [1, 1]]))
    assert run(["dist", "--graph", str(k2_file), "--points", str(points), "--format", "json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["distances"] == [pytest.approx(0.75)]


def test_dist_odd_rows(capsys, k2_file, points_file):
    points = points_file(np.array([[0, 0], [1, 1], [0, 1]]))
    assert run(["dist", "--graph", str(k2_file), "--points", str(points)]) == EXIT_USAGE
    assert "even number of rows" in capsys.readouterr().err


def test_missing_graph_reports_json_error(capsys, tmp_path, points_file):
    points = points_file(np.array([[0, 0], [1, 1]]))
    code = run(["--format", "json", "dist", "--graph", str(tmp_path / "absent.json"), "--points", str(points)])
    assert code == EXIT_USAGE
    error = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert error["error_code"] == "GRAPH_FORMAT_ERROR"


def test_invalid_generator_parameters(capsys):
    assert run(["generate", "--kind", "watts_strogatz", "--n", "10", "--k", "3", "--beta", "0.1"]) == EXIT_USAGE
    assert capsys.readouterr().err.strip().splitlines()[-1].startswith("error: ")


def test_usage_error():
    assert run(["no-such-command"]) == EXIT_USAGE


def test_verify_binary_oracle(capsys):
    assert run(["verify", "--law", "binary-oracle", "--trials", "100", "--seed", "7"]) == EXIT_OK
    assert capsys.readouterr().out.startswith("binary-oracle: PASS trials=100 seed=7")


def test_verify_json(capsys):
    assert run(["verify", "--law", "sandwich", "--trials", "3", "--format", "json"]) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report["passed"] is True
    assert report["law"] == "sandwich"


def test_verify_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_VERIFY_FAILED, EXIT_USAGE}) == 3


def test_union(capsys, k2_file, points_file):
    points = points_file(np.array([[0, 0, 0, 0], [1, 1, 0, 0]]))
    args = ["union", "--graph1", str(k2_file), "--graph2", str(k2_file), "--points", str(points)]
    assert run(args) == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result["lhs"] == pytest.approx(0.375)
    assert result["gap"] <= 1e-12


def test_product(capsys, k2_file, points_file):
    points = points_file(np.array([[0, 0, 0, 0], [1, 0, 0, 0]]))
    args = ["product", "--graph1", str(k2_file), "--graph2", str(k2_file), "--points", str(points)]
    assert run(args) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    # Vertex (0, 0) and its two neighbours see the difference.
    assert report["lhs"] == pytest.approx(0.75)
    assert report["n1"] == report["n2"] == 2


def test_graphon(capsys, k2_file, json_file):
    g = json_file({"kind": "constant", "value": 0.2}, "g.json")
    h = json_file({"kind": "constant", "value": 0.8}, "h.json")
    assert run(["graphon", "--graph", str(k2_file), "--g", str(g), "--h", str(h)]) == EXIT_OK
    result = json.loads(capsys.readouterr().out)
    assert result["estimate"] == pytest.approx(0.3, abs=1e-12)
    assert result["mode"] == "grid"


def test_graphon_rejects_asymmetric_graph(capsys, graph_file, json_file):
    chain = graph_file(generate(GraphKind.CHAIN, 2), "chain.json")
    g = json_file({"kind": "constant", "value": 0.2}, "g.json")
    code = run(["--format", "json", "graphon", "--graph", str(chain), "--g", str(g), "--h", str(g)])
    assert code == EXIT_USAGE
    assert json.loads(capsys.readouterr().err.strip().splitlines()[-1])["error_code"] == "SYMMETRY_ERROR"


def test_experiment_csv_to_stdout(capsys, graph_file):
    graph = graph_file(generate(GraphKind.NULL, 8), "null8.json")
    args = ["experiment", "--graph", str(graph), "--source", "cube-vertices", "--bins", "9"]
    assert run(args) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("# kind=distance label=null8 source=cube-vertices")
    assert parse_csv_counts(out) == [math.comb(8, k) * 256 for k in range(9)]


def test_experiment_json_by_suffix(graph_file, tmp_path):
    graph = graph_file(generate(GraphKind.CYCLE, 4), "cycle4.json")
    out = tmp_path / "summary.json"
    args = ["experiment", "--graph", str(graph), "--kind", "log-ratio", "--pairs", "400", "--out", str(out)]
    assert run(args) == EXIT_OK
    summary = json.loads(out.read_text())
    assert summary["kind"] == "log-ratio"
    assert summary["count"] + summary["excluded"] == 400


def test_reproduce_figure(capsys, tmp_path):
    code = run(["reproduce-figure", "--id", "4A", "--bins", "8", "--out", str(tmp_path)])
    assert code == EXIT_OK
    written = capsys.readouterr().out.split()
    assert written == [str(tmp_path / "fig4A_null8.csv"), str(tmp_path / "fig4A_null8.svg")]
    rows = [
        line.split(",")
        for line in (tmp_path / "fig4A_null8.csv").read_text().splitlines()[3:]
    ]
    for left, _, count in rows:
        assert int(count) > 0
        assert (float(left) * 8) == pytest.approx(round(float(left) * 8))
