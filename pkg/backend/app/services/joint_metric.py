"""
Joint Metric Service

Evaluates d_{X,G,P}: the mean over vertices j of the row factors
1 - prod_i (1 - d_i)^{1/p_ji}, together with its binary-alphabet closure
form, digraph weights and the union / product decomposition laws.
"""

from typing import Any, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import ValidationError

from app.core.exceptions import InvalidParameterError, PreconditionError
from app.core.logging import get_logger
from app.core.parallel import block_ranges, parallel_map
from app.models.graph import VertexSet, WeightedDigraph
from app.models.joint import (
    DistancePair,
    JointMetricSpace,
    ProductLawReport,
    UnionDecomposition,
)
from app.models.metric import ElementalMetric, ProductPoint
from app.services.digraph import (
    cartesian_product,
    disjoint_union,
    exponent_matrix,
    hereditary_closure,
)
from app.services.metric_core import (
    ComputeMethod,
    elemental_distances,
    log_complement,
    subadditive_transform,
)

logger = get_logger(__name__)


def make_space(graph: WeightedDigraph, metrics: Sequence[ElementalMetric]) -> JointMetricSpace:
    """Bundle a graph with its factor metrics."""
    try:
        return JointMetricSpace(graph=graph, metrics=tuple(metrics))
    except ValidationError as e:
        raise InvalidParameterError(
            "metrics do not match the graph", {"errors": e.errors(include_url=False)}
        ) from e


def _as_pairs(s: JointMetricSpace, x: Any, y: Any) -> Tuple[np.ndarray, np.ndarray]:
    xa, ya = np.asarray(x), np.asarray(y)
    if xa.ndim == 1:
        xa, ya = xa[np.newaxis, :], ya[np.newaxis, :]
    if xa.shape != ya.shape or xa.ndim != 2 or xa.shape[1] != s.n:
        raise InvalidParameterError(
            f"points must have {s.n} coordinates",
            {"x": list(np.shape(x)), "y": list(np.shape(y))},
        )
    return xa, ya


# =============================================================================
# Row factors
# =============================================================================

def _row_factors_log(exponents: np.ndarray, d: np.ndarray) -> np.ndarray:
    """(pairs, N) row factors from elemental distances, log domain."""
    logs, saturated = log_complement(d)
    row_logs = logs @ exponents.T
    present = (exponents > 0).astype(float)
    row_saturated = (saturated.astype(float) @ present.T) > 0
    return np.where(row_saturated, 1.0, subadditive_transform(-row_logs))


def _row_factors_direct(exponents: np.ndarray, d: np.ndarray) -> np.ndarray:
    # (1 - d)^0 == 1, so absent edges drop out of the product.
    powers = (1.0 - d)[:, np.newaxis, :] ** exponents[np.newaxis, :, :]
    return 1.0 - np.prod(powers, axis=2)


def row_factors(
    s: JointMetricSpace,
    x: Any,
    y: Any,
    method: ComputeMethod = "log",
) -> np.ndarray:
    """Row factors d_{P,j} for every pair, shape (pairs, N)."""
    xa, ya = _as_pairs(s, x, y)
    exponents = exponent_matrix(s.graph)
    d = elemental_distances(s.metrics, xa, ya)
    if method == "direct":
        return _row_factors_direct(exponents, d)
    return _row_factors_log(exponents, d)


def row_factor(s: JointMetricSpace, j: int, x: ProductPoint, y: ProductPoint) -> float:
    """1 - prod over j's out-factors i of (1 - d_i)^{1/p_ji}."""
    if not 0 <= j < s.n:
        raise InvalidParameterError(f"vertex {j} outside range 0..{s.n - 1}", {"j": j})
    return float(row_factors(s, x, y)[0, j])


# =============================================================================
# Joint distance
# =============================================================================

def joint_distances(
    s: JointMetricSpace,
    x: Any,
    y: Any,
    method: ComputeMethod = "log",
    threads: Optional[int] = None,
) -> np.ndarray:
    """
    Batched d_{X,G,P} over aligned rows of x and y.

    Work is split into fixed-size blocks evaluated in parallel; results
    come back in input order.
    """
    xa, ya = _as_pairs(s, x, y)
    exponents = exponent_matrix(s.graph)

    def evaluate(block: range) -> np.ndarray:
        d = elemental_distances(s.metrics, xa[block.start:block.stop], ya[block.start:block.stop])
        rows = _row_factors_direct(exponents, d) if method == "direct" else _row_factors_log(exponents, d)
        return rows.sum(axis=1) / s.n

    blocks = block_ranges(len(xa))
    if not blocks:
        return np.empty(0, dtype=float)
    return np.concatenate(parallel_map(evaluate, blocks, threads=threads))


def joint_distance(s: JointMetricSpace, x: ProductPoint, y: ProductPoint) -> float:
    """d_{X,G,P}(x, y) = (1/N) sum_j row_factor(j)."""
    return float(joint_distances(s, x, y, threads=1)[0])


def direct_joint_distance(s: JointMetricSpace, x: ProductPoint, y: ProductPoint) -> float:
    """Same value computed with direct powers, for cross-checking."""
    return float(joint_distances(s, x, y, method="direct", threads=1)[0])


# =============================================================================
# Binary alphabets
# =============================================================================

def support(x: ProductPoint, y: ProductPoint, metrics: Sequence[ElementalMetric]) -> VertexSet:
    """Coordinates with positive elemental distance."""
    d = elemental_distances(metrics, np.asarray(x), np.asarray(y))
    return frozenset(int(j) for j in np.flatnonzero(d > 0))


def _require_binary(s: JointMetricSpace) -> None:
    offending = [j for j, metric in enumerate(s.metrics) if not metric.is_binary]
    if offending:
        raise PreconditionError(
            "closure formula requires {0,1}-valued metrics",
            {"non_binary_factors": offending},
        )


def binary_closure_size(s: JointMetricSpace, x: ProductPoint, y: ProductPoint) -> int:
    """|<supp(x, y)>| as an exact integer."""
    _require_binary(s)
    return len(hereditary_closure(s.graph, support(x, y, s.metrics)))


def binary_joint_distance(s: JointMetricSpace, x: ProductPoint, y: ProductPoint) -> float:
    """
    |<supp(x, y)>| / N.

    Equals joint_distance when the graph is transitively closed; on other
    graphs joint_distance counts one-hop predecessors of the support instead.
    """
    return binary_closure_size(s, x, y) / s.n


def digraph_weight(g: WeightedDigraph, v: ProductPoint, identity: Any = 0) -> int:
    """omega_G(v) = |<supp(v)>|, supp(v) = non-identity entries."""
    if len(v) != g.n:
        raise InvalidParameterError(f"vector must have {g.n} entries", {"length": len(v)})
    supp = [i for i, value in enumerate(v) if value != identity]
    return len(hereditary_closure(g, supp))


# =============================================================================
# Reference graphs
# =============================================================================

def reference_graphs(g: WeightedDigraph) -> Tuple[WeightedDigraph, WeightedDigraph]:
    """
    (null, full) graphs sharing g's weights: null keeps only g's self-loops,
    full adds every missing ordered pair with weight 1.
    """
    self_loops = {(j, i): p for (j, i), p in g.edges.items() if j == i}
    null = WeightedDigraph(n=g.n, edges=self_loops, implicit_self_loops=g.implicit_self_loops)

    full_edges = dict(g.edges)
    for j in range(g.n):
        for i in range(g.n):
            if j != i:
                full_edges.setdefault((j, i), 1.0)
    full = WeightedDigraph(n=g.n, edges=full_edges, implicit_self_loops=g.implicit_self_loops)
    return null, full


def reference_distances(s: JointMetricSpace, x: ProductPoint, y: ProductPoint) -> DistancePair:
    """d_null and d_full for the pair; d_null <= joint_distance <= d_full."""
    null, full = reference_graphs(s.graph)
    return DistancePair(
        d_null=joint_distance(s.with_graph(null), x, y),
        d_full=joint_distance(s.with_graph(full), x, y),
    )


# =============================================================================
# Decomposition laws
# =============================================================================

def union_decomposition_many(
    spaces: Sequence[JointMetricSpace],
    x: ProductPoint,
    y: ProductPoint,
) -> UnionDecomposition:
    """r-fold union law over concatenated points."""
    if not spaces:
        raise InvalidParameterError("at least one space is required")
    total = sum(s.n for s in spaces)
    if len(x) != total or len(y) != total:
        raise InvalidParameterError(
            f"points must have {total} coordinates", {"x": len(x), "y": len(y)}
        )

    graph = spaces[0].graph
    metrics: List[ElementalMetric] = list(spaces[0].metrics)
    for s in spaces[1:]:
        graph = disjoint_union(graph, s.graph)
        metrics.extend(s.metrics)
    lhs = joint_distance(make_space(graph, metrics), x, y)

    xa, ya = np.asarray(x), np.asarray(y)
    parts: List[float] = []
    offset = 0
    for s in spaces:
        parts.append(joint_distance(s, xa[offset:offset + s.n], ya[offset:offset + s.n]))
        offset += s.n
    rhs = sum(s.n / total * d for s, d in zip(spaces, parts))

    return UnionDecomposition(lhs=lhs, rhs=rhs, parts=parts, sizes=[s.n for s in spaces])


def union_decomposition(
    s1: JointMetricSpace,
    s2: JointMetricSpace,
    x: ProductPoint,
    y: ProductPoint,
) -> UnionDecomposition:
    """lhs on G1 + G2 vs (N1/N) d1 + (N2/N) d2."""
    return union_decomposition_many([s1, s2], x, y)


def product_space(
    s1: JointMetricSpace,
    s2: JointMetricSpace,
    metrics: Optional[Sequence[ElementalMetric]] = None,
) -> JointMetricSpace:
    """
    Joint space on G1 [] G2. Vertex (u1, u2) defaults to s2's metric at u2,
    the codomain factor of the uniform metric on F(X_u1, X_u2).
    """
    graph = cartesian_product(s1.graph, s2.graph)
    if metrics is None:
        metrics = [s2.metrics[u2] for _ in range(s1.n) for u2 in range(s2.n)]
    return make_space(graph, metrics)


def product_law_report(
    s1: JointMetricSpace,
    s2: JointMetricSpace,
    x: ProductPoint,
    y: ProductPoint,
    metrics: Optional[Sequence[ElementalMetric]] = None,
) -> ProductLawReport:
    """
    Diagnostic comparison of the product-graph distance with the printed
    closed form 1 - (N1^2/N - d1)(N2^2/N - d2), N = N1 + N2.

    d1 averages s1's graph over the columns (., u2) and d2 averages s2
    over the rows (u1, .) of the point laid out as an N1 x N2 matrix.
    """
    space = product_space(s1, s2, metrics)
    lhs = joint_distance(space, x, y)

    n1, n2 = s1.n, s2.n
    xm = np.asarray(x).reshape(n1, n2)
    ym = np.asarray(y).reshape(n1, n2)
    product_metrics = space.metrics

    columns = []
    for u2 in range(n2):
        column_space = make_space(s1.graph, [product_metrics[u1 * n2 + u2] for u1 in range(n1)])
        columns.append(joint_distance(column_space, xm[:, u2], ym[:, u2]))
    rows = []
    for u1 in range(n1):
        row_space = make_space(s2.graph, product_metrics[u1 * n2:(u1 + 1) * n2])
        rows.append(joint_distance(row_space, xm[u1, :], ym[u1, :]))
    d1 = float(np.mean(columns))
    d2 = float(np.mean(rows))

    n = n1 + n2
    rhs = 1.0 - (n1 ** 2 / n - d1) * (n2 ** 2 / n - d2)
    logger.debug("product_law_report", lhs=lhs, rhs_as_printed=rhs, n1=n1, n2=n2)
    return ProductLawReport(
        lhs=lhs,
        rhs_as_printed=rhs,
        normalization_used=f"1/(N1*N2) = 1/{n1 * n2}",
        d1=d1,
        d2=d2,
        n1=n1,
        n2=n2,
    )
