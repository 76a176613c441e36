"""
Digraph Service

Reachability, hereditary closure, edits, disjoint union, Cartesian product
and the synthetic graph generators used by the experiments.
"""

from collections import deque
from itertools import combinations
from typing import Dict, Iterable, Optional, Set

import networkx as nx
import numpy as np

from app.core.exceptions import EditRejectedError, InvalidParameterError
from app.core.logging import get_logger
from app.core.rng import LANE_REWIRE, LANE_SPARSE, stream
from app.models.graph import (
    Edge,
    EditKind,
    GraphEdit,
    GraphKind,
    Orientation,
    VertexSet,
    WeightedDigraph,
)

logger = get_logger(__name__)


def _check_vertices(g: WeightedDigraph, vertices: Iterable[int]) -> VertexSet:
    members = frozenset(int(v) for v in vertices)
    bad = sorted(v for v in members if not 0 <= v < g.n)
    if bad:
        raise InvalidParameterError(
            f"vertices outside range 0..{g.n - 1}", {"vertices": bad}
        )
    return members


def _predecessors(g: WeightedDigraph) -> Dict[int, Set[int]]:
    preds: Dict[int, Set[int]] = {v: set() for v in range(g.n)}
    for j, i in g.edges:
        preds[i].add(j)
    return preds


# =============================================================================
# Reachability
# =============================================================================

def hereditary_closure(g: WeightedDigraph, a: Iterable[int]) -> VertexSet:
    """Vertices with a directed path (length >= 0) into a."""
    start = _check_vertices(g, a)
    preds = _predecessors(g)
    seen = set(start)
    queue = deque(sorted(start))
    while queue:
        v = queue.popleft()
        for u in sorted(preds[v]):
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return frozenset(seen)


def one_hop_support(g: WeightedDigraph, a: Iterable[int]) -> VertexSet:
    """Rows j whose product contains a factor in a (self-loop included)."""
    members = _check_vertices(g, a)
    return frozenset(
        j for j in range(g.n) if any(g.weight(j, i) is not None for i in members)
    )


def exponent_matrix(g: WeightedDigraph) -> np.ndarray:
    """E[j, i] = 1 / p_ji for present edges (self-loops included), else 0."""
    e = np.zeros((g.n, g.n), dtype=float)
    for (j, i), p in g.edges.items():
        e[j, i] = 1.0 / p
    if g.implicit_self_loops:
        for v in range(g.n):
            if (v, v) not in g.edges:
                e[v, v] = 1.0
    return e


def adjacency(g: WeightedDigraph) -> np.ndarray:
    """Boolean one-hop matrix, self-loops included."""
    return exponent_matrix(g) > 0


# =============================================================================
# Edits
# =============================================================================

def apply_edit(g: WeightedDigraph, edit: GraphEdit) -> WeightedDigraph:
    """Return a new graph with one edge added, removed or re-weighted."""
    edge: Edge = (edit.j, edit.i)
    if not (0 <= edit.j < g.n and 0 <= edit.i < g.n):
        raise EditRejectedError(f"edge {edge} outside vertex range", edge)

    edges = dict(g.edges)
    if edit.kind == EditKind.ADD:
        if edge in edges:
            raise EditRejectedError(f"edge {edge} already present", edge)
        if edit.p is None or not 0.0 < edit.p <= 1.0:
            raise EditRejectedError(f"weight {edit.p} for edge {edge} outside (0, 1]", edge)
        edges[edge] = float(edit.p)
    elif edit.kind == EditKind.REMOVE:
        if edge not in edges:
            raise EditRejectedError(f"edge {edge} not present", edge)
        del edges[edge]
    else:
        if edge not in edges:
            raise EditRejectedError(f"edge {edge} not present", edge)
        new_weight = edges[edge] + (edit.delta or 0.0)
        if not 0.0 < new_weight < 1.0:
            raise EditRejectedError(
                f"perturbed weight {new_weight} for edge {edge} outside (0, 1)",
                edge,
                {"weight": new_weight},
            )
        edges[edge] = new_weight

    return WeightedDigraph(n=g.n, edges=edges, implicit_self_loops=g.implicit_self_loops)


# =============================================================================
# Semiring operations
# =============================================================================

def _with_explicit_self_loops(g: WeightedDigraph) -> Dict[Edge, float]:
    edges = dict(g.edges)
    if g.implicit_self_loops:
        for v in range(g.n):
            edges.setdefault((v, v), 1.0)
    return edges


def disjoint_union(g1: WeightedDigraph, g2: WeightedDigraph) -> WeightedDigraph:
    """g1 followed by g2 relabelled by +n1; block-diagonal weights."""
    if g1.implicit_self_loops == g2.implicit_self_loops:
        first, second, implicit = dict(g1.edges), dict(g2.edges), g1.implicit_self_loops
    else:
        first, second, implicit = _with_explicit_self_loops(g1), _with_explicit_self_loops(g2), False

    edges = dict(first)
    for (j, i), p in second.items():
        edges[(j + g1.n, i + g1.n)] = p
    return WeightedDigraph(n=g1.n + g2.n, edges=edges, implicit_self_loops=implicit)


def cartesian_product(g1: WeightedDigraph, g2: WeightedDigraph) -> WeightedDigraph:
    """
    G1 [] G2 on V1 x V2 with (u1, u2) -> u1 * n2 + u2.

    An edge moves exactly one coordinate along an edge of its factor and
    inherits that factor's weight. Explicit self-weights combine as the
    smaller effective self-weight of the two factors.
    """
    n1, n2 = g1.n, g2.n
    edges: Dict[Edge, float] = {}

    for u1 in range(n1):
        for (u2, v2) in g2.non_self_edges():
            edges[(u1 * n2 + u2, u1 * n2 + v2)] = g2.edges[(u2, v2)]
    for u2 in range(n2):
        for (u1, v1) in g1.non_self_edges():
            edges[(u1 * n2 + u2, v1 * n2 + u2)] = g1.edges[(u1, v1)]

    implicit = g1.implicit_self_loops and g2.implicit_self_loops
    for u1 in range(n1):
        for u2 in range(n2):
            explicit = (u1, u1) in g1.edges or (u2, u2) in g2.edges
            w1, w2 = g1.weight(u1, u1), g2.weight(u2, u2)
            if explicit or not implicit:
                present = [w for w in (w1, w2) if w is not None]
                if present:
                    v = u1 * n2 + u2
                    edges[(v, v)] = min(present)

    return WeightedDigraph(n=n1 * n2, edges=edges, implicit_self_loops=implicit)


def transitive_closure(g: WeightedDigraph) -> WeightedDigraph:
    """Add every path-reachable pair (j, i), j != i, as an edge of weight 1."""
    edges = dict(g.edges)
    successors: Dict[int, Set[int]] = {v: set() for v in range(g.n)}
    for j, i in g.edges:
        successors[j].add(i)

    for j in range(g.n):
        seen: Set[int] = set()
        queue = deque(sorted(successors[j]))
        while queue:
            v = queue.popleft()
            if v in seen:
                continue
            seen.add(v)
            queue.extend(sorted(successors[v] - seen))
        for i in sorted(seen):
            if i != j:
                edges.setdefault((j, i), 1.0)
    return WeightedDigraph(n=g.n, edges=edges, implicit_self_loops=g.implicit_self_loops)


def symmetrize(g: WeightedDigraph) -> WeightedDigraph:
    """Add the reverse of every edge with the same weight; existing reverses are kept."""
    edges = dict(g.edges)
    for (j, i), p in g.edges.items():
        edges.setdefault((i, j), p)
    return WeightedDigraph(n=g.n, edges=edges, implicit_self_loops=g.implicit_self_loops)


def upper(g: WeightedDigraph) -> WeightedDigraph:
    """Keep edges (j, i) with j < i, plus explicit self-loops."""
    edges = {(j, i): p for (j, i), p in g.edges.items() if j <= i}
    return WeightedDigraph(n=g.n, edges=edges, implicit_self_loops=g.implicit_self_loops)


def is_symmetric(g: WeightedDigraph) -> bool:
    """True if every edge has a reverse edge of equal weight."""
    return all(g.edges.get((i, j)) == p for (j, i), p in g.edges.items())


# =============================================================================
# Generators
# =============================================================================

def _require(condition: bool, message: str, **details: object) -> None:
    if not condition:
        raise InvalidParameterError(message, dict(details))


def _from_undirected(n: int, pairs: Iterable[Edge], weight: float) -> WeightedDigraph:
    edges: Dict[Edge, float] = {}
    for u, v in pairs:
        edges[(u, v)] = weight
        edges[(v, u)] = weight
    return WeightedDigraph(n=n, edges=edges)


def watts_strogatz_pairs(n: int, k: int, beta: float, seed: int) -> Set[Edge]:
    """
    Ring lattice with k/2 neighbours per side, each lattice edge rewired with
    probability beta. Edge (u, u + r) draws from its own counter stream
    indexed (r - 1) * n + u, so the result depends only on (n, k, beta, seed).
    """
    graph = nx.Graph()
    graph.add_nodes_from(range(n))
    for r in range(1, k // 2 + 1):
        for u in range(n):
            graph.add_edge(u, (u + r) % n)

    if beta > 0:
        for r in range(1, k // 2 + 1):
            for u in range(n):
                rng = stream(seed, (r - 1) * n + u, LANE_REWIRE)
                if rng.random() >= beta:
                    continue
                v = (u + r) % n
                if not graph.has_edge(u, v) or graph.degree(u) >= n - 1:
                    continue
                candidates = [w for w in range(n) if w != u and not graph.has_edge(u, w)]
                w = candidates[int(rng.integers(len(candidates)))]
                graph.remove_edge(u, v)
                graph.add_edge(u, w)

    return {(min(u, v), max(u, v)) for u, v in graph.edges()}


def buckyball_pairs() -> Set[Edge]:
    """
    Truncated icosahedron: one vertex per (vertex, neighbour) dart of the
    icosahedron, joined across each icosahedron edge and around each vertex
    in its planar rotation order.
    """
    ico = nx.icosahedral_graph()
    _, embedding = nx.check_planarity(ico)
    darts = sorted((v, u) for v in ico.nodes for u in ico.neighbors(v))
    label = {dart: index for index, dart in enumerate(darts)}

    pairs: Set[Edge] = set()
    for v, u in darts:
        a, b = label[(v, u)], label[(u, v)]
        pairs.add((min(a, b), max(a, b)))
    for v in sorted(ico.nodes):
        ring = list(embedding.neighbors_cw_order(v))
        for index, u in enumerate(ring):
            a, b = label[(v, u)], label[(v, ring[(index + 1) % len(ring)])]
            pairs.add((min(a, b), max(a, b)))
    return pairs


def generate(
    kind: GraphKind,
    n: Optional[int] = None,
    *,
    weight: float = 1.0,
    rows: Optional[int] = None,
    cols: Optional[int] = None,
    k: Optional[int] = None,
    beta: Optional[float] = None,
    m: Optional[int] = None,
    seed: int = 0,
    orientation: Orientation = Orientation.UNDIRECTED,
) -> WeightedDigraph:
    """
    Build a synthetic graph. Deterministic given (kind, parameters, seed).

    Every generator keeps implicit self-loops; ``weight`` applies to all
    explicit edges.
    """
    kind = GraphKind(kind)
    _require(0.0 < weight <= 1.0, "weight must lie in (0, 1]", weight=weight)

    if kind == GraphKind.BUCKYBALL:
        graph = _from_undirected(60, sorted(buckyball_pairs()), weight)
    elif kind == GraphKind.GRID2D:
        _require(rows is not None and cols is not None and rows >= 1 and cols >= 1,
                 "grid2d requires rows >= 1 and cols >= 1", rows=rows, cols=cols)
        grid = nx.grid_2d_graph(rows, cols)
        pairs = sorted(tuple(sorted((r1 * cols + c1, r2 * cols + c2)))
                       for (r1, c1), (r2, c2) in grid.edges())
        graph = _from_undirected(rows * cols, pairs, weight)
    else:
        _require(n is not None and n >= 1, "n must be >= 1", n=n)
        assert n is not None
        edges: Dict[Edge, float] = {}

        if kind == GraphKind.NULL:
            pass
        elif kind == GraphKind.COMPLETE:
            edges = {(j, i): weight for j in range(n) for i in range(n) if j != i}
        elif kind == GraphKind.STAR_OUT:
            edges = {(0, leaf): weight for leaf in range(1, n)}
        elif kind == GraphKind.STAR_IN:
            edges = {(leaf, 0): weight for leaf in range(1, n)}
        elif kind in (GraphKind.CHAIN, GraphKind.POSET_CHAIN):
            edges = {(v, v + 1): weight for v in range(n - 1)}
        elif kind == GraphKind.CYCLE:
            _require(n >= 2, "cycle requires n >= 2", n=n)
            edges = {(v, (v + 1) % n): weight for v in range(n)}
        elif kind == GraphKind.WATTS_STROGATZ:
            _require(k is not None and k >= 2 and k % 2 == 0 and k < n,
                     "watts_strogatz requires even k with 2 <= k < n", k=k, n=n)
            _require(beta is not None and 0.0 <= beta <= 1.0,
                     "beta must lie in [0, 1]", beta=beta)
            assert k is not None and beta is not None
            graph = _from_undirected(n, sorted(watts_strogatz_pairs(n, k, beta, seed)), weight)
            if Orientation(orientation) == Orientation.UPPER:
                graph = upper(graph)
            edges = dict(graph.edges)
        elif kind == GraphKind.RANDOM_SPARSE:
            all_pairs = list(combinations(range(n), 2))
            _require(m is not None and 0 <= m <= len(all_pairs),
                     f"random_sparse requires 0 <= m <= {len(all_pairs)}", m=m)
            assert m is not None
            rng = stream(seed, 0, LANE_SPARSE)
            chosen = sorted(int(c) for c in rng.choice(len(all_pairs), size=m, replace=False))
            edges = dict(_from_undirected(n, [all_pairs[c] for c in chosen], weight).edges)

        graph = WeightedDigraph(n=n, edges=edges)
        if kind == GraphKind.POSET_CHAIN:
            graph = transitive_closure(graph)
            graph = WeightedDigraph(n=n, edges={e: weight for e in graph.edges})

    logger.debug("graph_generated", kind=kind.value, n=graph.n, edges=len(graph.edges))
    return graph
