"""
Law Verification Service

Seeded property suites for the joint metric: metric axioms, edge and
weight monotonicity, the reference sandwich, the binary closure formula,
the union and product constructions, log/direct agreement and the
graphon estimator. Each trial draws from its own counter stream, so a
failing trial reproduces from (seed, trial) alone.
"""

from typing import Callable, Dict, List, Sequence

import networkx as nx
import numpy as np
from numpy.random import Generator

from app.core.logging import get_logger
from app.core.rng import LANE_GRAPHS, stream
from app.models.graph import Edge, GraphEdit, GraphKind, WeightedDigraph
from app.models.graphon import EstimatorConfig, EstimatorMode
from app.models.joint import JointMetricSpace
from app.models.metric import ElementalMetric, ProductPoint
from app.models.verification import Law, VerificationReport
from app.services.digraph import (
    apply_edit,
    cartesian_product,
    generate,
    one_hop_support,
    symmetrize,
    transitive_closure,
    upper,
)
from app.services.graphon import (
    constant_graphon,
    constant_path,
    graphon_distance,
    piecewise_path,
    step_cellwise_distance,
    step_graphon,
)
from app.services.joint_metric import (
    binary_closure_size,
    joint_distances,
    make_space,
    product_law_report,
    reference_graphs,
    union_decomposition,
    union_decomposition_many,
)
from app.services.metric_core import (
    discrete_metric,
    half_absolute_metric,
    table_metric,
    triangle_violation,
)

logger = get_logger(__name__)

TOL = 1e-12
LOG_DIRECT_TOL = 1e-10
MAX_FAILURES = 20
# Triples or pairs drawn per trial.
PAIRS_PER_TRIAL = 200
# Fraction of MC runs that must land within 4 standard errors.
MC_COVERAGE = 0.95


class _Tally:
    """Accumulates checks for one suite run."""

    def __init__(self, law: Law, trials: int, seed: int):
        self.law = law
        self.trials = trials
        self.seed = seed
        self.checks = 0
        self.max_violation = 0.0
        self.failures: List[str] = []

    def check(self, violation: float, where: str, tol: float = TOL) -> None:
        """violation <= tol passes; the largest positive one is recorded."""
        self.checks += 1
        if violation > self.max_violation:
            self.max_violation = float(violation)
        if violation > tol and len(self.failures) < MAX_FAILURES:
            self.failures.append(f"{where}: violation {violation:.3e}")

    def require(self, ok: bool, where: str) -> None:
        self.checks += 1
        if not ok and len(self.failures) < MAX_FAILURES:
            self.failures.append(where)

    def report(self) -> VerificationReport:
        return VerificationReport(
            law=self.law,
            trials=self.trials,
            seed=self.seed,
            passed=not self.failures,
            checks=self.checks,
            max_violation=self.max_violation,
            failures=self.failures,
        )


# =============================================================================
# Random instances and oracles
# =============================================================================

def random_weight(rng: Generator) -> float:
    """Uniform on (0, 1]."""
    return float(1.0 - rng.random())


def random_graph(
    rng: Generator,
    n: int,
    max_edges: int = -1,
    self_loop_rate: float = 0.3,
    adversarial_rate: float = 0.0,
) -> WeightedDigraph:
    """Random explicit edge set with weights in (0, 1]; implicit self-loops kept."""
    pairs = [(j, i) for j in range(n) for i in range(n) if j != i]
    limit = len(pairs) if max_edges < 0 else min(max_edges, len(pairs))
    count = int(rng.integers(0, limit + 1))
    chosen = rng.choice(len(pairs), size=count, replace=False) if count else []

    def draw() -> float:
        return 1e-3 if rng.random() < adversarial_rate else random_weight(rng)

    edges: Dict[Edge, float] = {pairs[int(c)]: draw() for c in chosen}
    for v in range(n):
        if rng.random() < self_loop_rate:
            edges[(v, v)] = draw()
    return WeightedDigraph(n=n, edges=edges)


def main_formula_oracle(
    g: WeightedDigraph,
    metrics: Sequence[ElementalMetric],
    x: ProductPoint,
    y: ProductPoint,
) -> float:
    """Plain-loop evaluation of (1/N) sum_j [1 - prod_i (1 - d_i)^{1/p_ji}]."""
    total = 0.0
    for j in range(g.n):
        product = 1.0
        for i in range(g.n):
            p = g.weight(j, i)
            if p is not None:
                product *= (1.0 - float(metrics[i].evaluate(x[i], y[i]))) ** (1.0 / p)
        total += 1.0 - product
    return total / g.n


def closure_oracle(g: WeightedDigraph, support: Sequence[int]) -> int:
    """|<support>| via networkx ancestors."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(g.n))
    dg.add_edges_from((j, i) for (j, i) in g.edges if j != i)
    closure = set(support)
    for v in support:
        closure |= nx.ancestors(dg, v)
    return len(closure)


def _half_absolute_space(g: WeightedDigraph) -> JointMetricSpace:
    return make_space(g, [half_absolute_metric() for _ in range(g.n)])


# =============================================================================
# Suites
# =============================================================================

def _axioms(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(1, 11))
    s = _half_absolute_space(random_graph(rng, n))
    x, y, z = rng.random((3, PAIRS_PER_TRIAL, n))

    d_xy = joint_distances(s, x, y)
    d_yx = joint_distances(s, y, x)
    d_xz = joint_distances(s, x, z)
    d_yz = joint_distances(s, y, z)
    d_xx = joint_distances(s, x, x)

    tally.require(bool(np.array_equal(d_xy, d_yx)), f"trial {trial}: symmetry not exact")
    tally.require(bool(np.all(d_xx == 0.0)), f"trial {trial}: d(x, x) != 0")
    distinct = np.any(x != y, axis=1)
    tally.require(bool(np.all(d_xy[distinct] > 0.0)), f"trial {trial}: d(x, y) = 0 for x != y")
    tally.check(float(np.max(d_xz - d_xy - d_yz)), f"trial {trial}: triangle")
    tally.check(
        triangle_violation(half_absolute_metric(), x[:, 0], y[:, 0], z[:, 0]),
        f"trial {trial}: elemental triangle",
    )


def _monotone_edge(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(2, 9))
    g = random_graph(rng, n)
    s = _half_absolute_space(g)
    x, y = rng.random((2, PAIRS_PER_TRIAL, n))
    d = joint_distances(s, x, y)

    absent = [(j, i) for j in range(n) for i in range(n) if j != i and (j, i) not in g.edges]
    if absent:
        j, i = absent[int(rng.integers(len(absent)))]
        plus = apply_edit(g, GraphEdit.add(j, i, random_weight(rng)))
        d_plus = joint_distances(s.with_graph(plus), x, y)
        tally.check(float(np.max(d - d_plus)), f"trial {trial}: adding ({j}, {i})")

    present = g.non_self_edges()
    if present:
        j, i = present[int(rng.integers(len(present)))]
        minus = apply_edit(g, GraphEdit.remove(j, i))
        d_minus = joint_distances(s.with_graph(minus), x, y)
        tally.check(float(np.max(d_minus - d)), f"trial {trial}: removing ({j}, {i})")


def _monotone_weight(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(2, 9))
    g = random_graph(rng, n)
    j, i = (int(v) for v in rng.choice(n, size=2, replace=False))
    p = float(rng.uniform(0.05, 0.95))
    edges = dict(g.edges)
    edges[(j, i)] = p
    g = WeightedDigraph(n=n, edges=edges)

    s = _half_absolute_space(g)
    x, y = rng.random((2, PAIRS_PER_TRIAL, n))
    d = joint_distances(s, x, y)

    up = apply_edit(g, GraphEdit.perturb(j, i, (1.0 - p) * 0.99 * float(rng.random())))
    down = apply_edit(g, GraphEdit.perturb(j, i, -p * 0.99 * float(rng.random())))
    d_up = joint_distances(s.with_graph(up), x, y)
    d_down = joint_distances(s.with_graph(down), x, y)
    tally.check(float(np.max(d_up - d)), f"trial {trial}: raising p_{j}{i}")
    tally.check(float(np.max(d - d_down)), f"trial {trial}: lowering p_{j}{i}")


def _sandwich(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(1, 11))
    g = random_graph(rng, n)
    s = _half_absolute_space(g)
    null, full = reference_graphs(g)
    x, y = rng.random((2, PAIRS_PER_TRIAL, n))

    d = joint_distances(s, x, y)
    d_null = joint_distances(s.with_graph(null), x, y)
    d_full = joint_distances(s.with_graph(full), x, y)
    tally.check(float(np.max(d_null - d)), f"trial {trial}: d_null > d")
    tally.check(float(np.max(d - d_full)), f"trial {trial}: d > d_full")


def _binary_oracle(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(1, 7))
    raw = random_graph(rng, n, max_edges=12, self_loop_rate=0.0)
    closed = transitive_closure(raw)
    metrics = [discrete_metric() for _ in range(n)]
    s_raw, s_closed = make_space(raw, metrics), make_space(closed, metrics)

    codes = np.arange(2 ** n)
    diff = (codes[:, np.newaxis] >> np.arange(n)) & 1
    x = rng.integers(0, 2, size=diff.shape)
    y = x ^ diff
    d_closed = joint_distances(s_closed, x, y)
    d_raw = joint_distances(s_raw, x, y)

    for row in range(len(codes)):
        supp = [int(v) for v in np.flatnonzero(diff[row])]
        expected = closure_oracle(raw, supp)
        got = int(round(d_closed[row] * n))
        tally.require(got == expected, f"trial {trial}: support {supp} closure {expected}, distance gives {got}")
        tally.check(abs(d_closed[row] - expected / n), f"trial {trial}: support {supp}")
        tally.require(
            binary_closure_size(s_closed, x[row], y[row]) == expected,
            f"trial {trial}: binary_closure_size disagrees on {supp}",
        )
        one_hop = len(one_hop_support(raw, supp))
        tally.check(abs(d_raw[row] - one_hop / n), f"trial {trial}: one-hop identity on {supp}")


def _union(tally: _Tally, rng: Generator, trial: int) -> None:
    r = int(rng.integers(2, 5))
    spaces = [_half_absolute_space(random_graph(rng, int(rng.integers(1, 5)))) for _ in range(r)]
    total = sum(s.n for s in spaces)
    x, y = rng.random((2, total))
    result = union_decomposition_many(spaces, x, y)
    tally.check(result.gap, f"trial {trial}: {r}-fold union")

    s1 = spaces[0]
    a, b = rng.random((2, s1.n))
    diagonal = union_decomposition(s1, s1, np.concatenate([a, a]), np.concatenate([b, b]))
    tally.check(abs(diagonal.lhs - diagonal.parts[0]), f"trial {trial}: diagonal pair")


def _log_direct(tally: _Tally, rng: Generator, trial: int) -> None:
    n = int(rng.integers(1, 11))
    s = _half_absolute_space(random_graph(rng, n, adversarial_rate=0.2))
    x, y = rng.random((2, PAIRS_PER_TRIAL, n))
    log = joint_distances(s, x, y, method="log")
    direct = joint_distances(s, x, y, method="direct")
    tally.check(float(np.max(np.abs(log - direct))), f"trial {trial}: log vs direct", tol=LOG_DIRECT_TOL)


def _binary_table() -> ElementalMetric:
    return table_metric([[0.0, 1.0], [1.0, 0.0]])


def _product(tally: _Tally, rng: Generator, trial: int) -> None:
    if trial == 0:
        k2 = generate(GraphKind.COMPLETE, 2)
        g1 = g2 = k2
        product = cartesian_product(k2, k2)
        tally.require(len(product.non_self_edges()) == 8, "K2 x K2 must have 8 non-self edges")
    else:
        g1 = random_graph(rng, int(rng.integers(1, 4)))
        g2 = random_graph(rng, int(rng.integers(1, 4)))
    s1 = make_space(g1, [_binary_table() for _ in range(g1.n)])
    s2 = make_space(g2, [_binary_table() for _ in range(g2.n)])

    size = g1.n * g2.n
    x, y = rng.integers(0, 2, size=(2, size))
    report = product_law_report(s1, s2, x, y)
    graph = cartesian_product(g1, g2)
    oracle = main_formula_oracle(graph, [_binary_table() for _ in range(size)], x, y)
    tally.check(abs(report.lhs - oracle), f"trial {trial}: product graph vs oracle")
    same = product_law_report(s1, s2, x, x)
    tally.require(same.lhs == 0.0, f"trial {trial}: product distance of x with itself")


def _graphon(tally: _Tally, rng: Generator, trial: int) -> bool:
    c = float(rng.uniform(0.2, 1.0))
    d = float(rng.uniform(0.0, 0.9))
    W = constant_graphon(c)
    g, h = constant_path(0.0), constant_path(2.0 * d)
    closed = 1.0 - (1.0 - d) ** (1.0 / c)

    grid = graphon_distance(W, g, h, EstimatorConfig(mode=EstimatorMode.GRID, resolution=16))
    tally.check(abs(grid.estimate - closed), f"trial {trial}: grid vs closed form", tol=LOG_DIRECT_TOL)

    mc_cfg = EstimatorConfig(mode=EstimatorMode.MONTE_CARLO, samples_x=256, samples_y=64, seed=trial)
    mc = graphon_distance(W, g, h, mc_cfg)
    se = mc.std_error or 0.0
    covered = abs(mc.estimate - closed) <= 4.0 * se + TOL

    for cfg in (EstimatorConfig(mode=EstimatorMode.GRID, resolution=8), mc_cfg):
        tally.require(graphon_distance(W, g, g, cfg).estimate == 0.0, f"trial {trial}: d(g, g) != 0")
    tally.require(
        graphon_distance(W, g, h, mc_cfg).estimate == graphon_distance(W, h, g, mc_cfg).estimate,
        f"trial {trial}: graphon symmetry",
    )

    c2 = float(rng.uniform(c, 1.0))
    larger = graphon_distance(constant_graphon(c2), g, h, EstimatorConfig(resolution=8))
    tally.check(larger.estimate - grid.estimate, f"trial {trial}: smaller W must not shrink the distance")

    n = int(rng.integers(1, 5))
    step = step_graphon(symmetrize(upper(random_graph(rng, n))))
    cells = rng.uniform(0.0, 0.9, size=n)
    breakpoints = np.linspace(0.0, 1.0, n + 1)
    gp = piecewise_path(breakpoints, [0.0] * n)
    hp = piecewise_path(breakpoints, [2.0 * v for v in cells])
    quad = graphon_distance(step, gp, hp, EstimatorConfig(resolution=8 * n))
    tally.check(
        abs(quad.estimate - step_cellwise_distance(step, cells)),
        f"trial {trial}: step graphon cellwise",
        tol=LOG_DIRECT_TOL,
    )
    return covered


_SUITES: Dict[Law, Callable[[_Tally, Generator, int], None]] = {
    Law.AXIOMS: _axioms,
    Law.MONOTONE_EDGE: _monotone_edge,
    Law.MONOTONE_WEIGHT: _monotone_weight,
    Law.SANDWICH: _sandwich,
    Law.BINARY_ORACLE: _binary_oracle,
    Law.UNION: _union,
    Law.LOG_DIRECT: _log_direct,
    Law.PRODUCT: _product,
}


def run_law(law: Law, trials: int = 100, seed: int = 0) -> VerificationReport:
    """Run one law suite; passed is True iff every assertion held."""
    law = Law(law)
    tally = _Tally(law, trials, seed)

    if law == Law.GRAPHON:
        covered = sum(_graphon(tally, stream(seed, t, LANE_GRAPHS), t) for t in range(trials))
        tally.require(
            covered >= MC_COVERAGE * trials,
            f"Monte Carlo within 4 standard errors in {covered}/{trials} runs",
        )
    else:
        suite = _SUITES[law]
        for t in range(trials):
            suite(tally, stream(seed, t, LANE_GRAPHS), t)

    report = tally.report()
    log = logger.info if report.passed else logger.warning
    log("law_verified", law=law.value, trials=trials, seed=seed,
        passed=report.passed, checks=report.checks, max_violation=report.max_violation)
    return report


def run_all(trials: int = 100, seed: int = 0) -> List[VerificationReport]:
    return [run_law(law, trials, seed) for law in Law]
