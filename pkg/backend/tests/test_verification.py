"""Tests for the seeded law suites and their oracles."""

import numpy as np
import pytest

from app.models.graph import GraphKind, WeightedDigraph
from app.models.verification import Law
from app.services.digraph import generate
from app.services.joint_metric import joint_distance, joint_distances, make_space
from app.services.metric_core import half_absolute_metric
from app.services.verification import closure_oracle, main_formula_oracle, random_graph, run_all, run_law


@pytest.mark.parametrize("law", list(Law))
def test_every_law_passes(law):
    report = run_law(law, trials=5, seed=1)
    assert report.passed, report.failures
    assert report.checks > 0
    assert report.law == law


def test_binary_oracle_full_run():
    report = run_law(Law.BINARY_ORACLE, trials=100, seed=7)
    assert report.passed, report.failures
    assert report.max_violation <= 1e-12


def test_reports_are_reproducible():
    assert run_law(Law.SANDWICH, trials=3, seed=4) == run_law(Law.SANDWICH, trials=3, seed=4)


def test_run_all_covers_every_law():
    reports = run_all(trials=1, seed=2)
    assert [r.law for r in reports] == list(Law)
    assert all(r.passed for r in reports)


def test_main_formula_oracle_agrees(half_space, rng):
    for _ in range(20):
        g = random_graph(rng, 5)
        metrics = [half_absolute_metric()] * 5
        x, y = rng.random((2, 5))
        assert abs(main_formula_oracle(g, metrics, x, y) - joint_distance(half_space(g), x, y)) <= 1e-12


def test_closure_oracle_on_chain():
    g = generate(GraphKind.CHAIN, 4)
    assert closure_oracle(g, [2]) == 3
    assert closure_oracle(g, []) == 0


def test_random_graph_weights(rng):
    for _ in range(20):
        g = random_graph(rng, 4, adversarial_rate=0.5)
        assert all(0.0 < p <= 1.0 for p in g.edges.values())
        assert np.all([g.weight(v, v) is not None for v in range(4)])


class TestAcceptanceScale:
    """Suites at full size: 10^4 triples, 10^3 unions, 100 Monte Carlo runs."""

    @pytest.mark.parametrize(
        "law, trials",
        [
            (Law.AXIOMS, 50),
            (Law.MONOTONE_EDGE, 100),
            (Law.MONOTONE_WEIGHT, 100),
            (Law.SANDWICH, 50),
            (Law.UNION, 1000),
            (Law.LOG_DIRECT, 50),
            (Law.PRODUCT, 50),
        ],
    )
    def test_law_holds(self, law, trials):
        report = run_law(law, trials=trials, seed=3)
        assert report.passed, report.failures
        assert report.trials == trials
        assert report.max_violation <= (1e-10 if law == Law.LOG_DIRECT else 1e-12)

    def test_graphon_coverage_over_one_hundred_runs(self):
        report = run_law(Law.GRAPHON, trials=100, seed=0)
        assert report.passed, report.failures

    def test_log_direct_with_exponents_of_one_thousand(self, rng):
        n = 6
        edges = {(j, i): 1e-3 for j in range(n) for i in range(n)}
        s = make_space(WeightedDigraph(n=n, edges=edges), [half_absolute_metric()] * n)
        x, y = rng.random((2, 10_000, n))
        log = joint_distances(s, x, y, method="log")
        direct = joint_distances(s, x, y, method="direct")
        assert np.max(np.abs(log - direct)) <= 1e-10
