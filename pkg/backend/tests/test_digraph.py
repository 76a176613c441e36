"""Tests for reachability, edits, semiring operations and generators."""

import numpy as np
import pytest
from pydantic import ValidationError

from app.core.exceptions import EditRejectedError, InvalidParameterError
from app.models.graph import GraphEdit, GraphKind, Orientation, WeightedDigraph
from app.services.digraph import (
    adjacency,
    apply_edit,
    buckyball_pairs,
    cartesian_product,
    disjoint_union,
    exponent_matrix,
    generate,
    hereditary_closure,
    is_symmetric,
    one_hop_support,
    symmetrize,
    transitive_closure,
    upper,
)


def _reach_matrix(g: WeightedDigraph) -> np.ndarray:
    """Boolean reflexive-transitive reachability by repeated squaring."""
    reach = adjacency(g) | np.eye(g.n, dtype=bool)
    while True:
        step = (reach.astype(int) @ reach.astype(int)) > 0
        if np.array_equal(step, reach):
            return reach
        reach = step


def _random_graph(rng: np.random.Generator, n: int, edges: int) -> WeightedDigraph:
    pairs = {(int(rng.integers(n)), int(rng.integers(n))) for _ in range(edges)}
    return WeightedDigraph(n=n, edges={p: float(rng.uniform(0.1, 1.0)) for p in pairs})


class TestWeightedDigraph:
    def test_implicit_self_loops(self):
        g = WeightedDigraph(n=2)
        assert g.weight(0, 0) == 1.0
        assert g.weight(0, 1) is None
        assert not g.has_edge(0, 0)

    def test_explicit_self_loop_overrides(self):
        g = WeightedDigraph(n=2, edges={(1, 1): 0.5})
        assert g.weight(1, 1) == 0.5

    def test_no_implicit_self_loops(self):
        assert WeightedDigraph(n=2, implicit_self_loops=False).weight(0, 0) is None

    @pytest.mark.parametrize("edges", [{(0, 2): 1.0}, {(0, 1): 0.0}, {(0, 1): 1.5}])
    def test_invalid_edges_rejected(self, edges):
        with pytest.raises(ValidationError):
            WeightedDigraph(n=2, edges=edges)

    def test_out_neighbors(self, chain3):
        assert chain3.out_neighbors(0) == [0, 1]
        assert chain3.out_neighbors(2) == [2]


class TestReachability:
    def test_chain_closure(self, chain3):
        assert hereditary_closure(chain3, {2}) == frozenset({0, 1, 2})
        assert hereditary_closure(chain3, {0}) == frozenset({0})
        assert hereditary_closure(chain3, set()) == frozenset()

    def test_one_hop_support(self, chain3):
        assert one_hop_support(chain3, {2}) == frozenset({1, 2})
        assert one_hop_support(chain3, {0}) == frozenset({0})

    def test_one_hop_without_self_loops(self):
        g = WeightedDigraph(n=2, edges={(0, 1): 1.0}, implicit_self_loops=False)
        assert one_hop_support(g, {1}) == frozenset({0})

    def test_out_of_range_vertex(self, chain3):
        with pytest.raises(InvalidParameterError):
            hereditary_closure(chain3, {3})

    def test_closure_matches_matrix_oracle(self, rng):
        for _ in range(50):
            n = int(rng.integers(1, 8))
            g = _random_graph(rng, n, int(rng.integers(0, 12)))
            reach = _reach_matrix(g)
            for target in range(n):
                expected = frozenset(int(j) for j in np.flatnonzero(reach[:, target]))
                assert hereditary_closure(g, {target}) == expected

    def test_closure_is_idempotent_and_monotone(self, rng):
        g = _random_graph(rng, 6, 8)
        a = hereditary_closure(g, {1})
        assert hereditary_closure(g, a) == a
        assert a <= hereditary_closure(g, {1, 4})

    def test_exponent_matrix(self):
        g = WeightedDigraph(n=2, edges={(0, 1): 0.25})
        np.testing.assert_array_equal(exponent_matrix(g), [[1.0, 4.0], [0.0, 1.0]])


class TestEdits:
    def test_add_and_remove(self, chain3):
        added = apply_edit(chain3, GraphEdit.add(2, 0, 0.5))
        assert added.weight(2, 0) == 0.5
        assert chain3.weight(2, 0) is None
        assert apply_edit(added, GraphEdit.remove(2, 0)) == chain3

    def test_add_existing_rejected(self, chain3):
        with pytest.raises(EditRejectedError) as exc:
            apply_edit(chain3, GraphEdit.add(0, 1, 0.5))
        assert exc.value.details["edge"] == [0, 1]

    def test_remove_missing_rejected(self, chain3):
        with pytest.raises(EditRejectedError):
            apply_edit(chain3, GraphEdit.remove(2, 0))

    def test_perturb(self):
        g = WeightedDigraph(n=2, edges={(0, 1): 0.5})
        assert apply_edit(g, GraphEdit.perturb(0, 1, 0.25)).weight(0, 1) == 0.75

    @pytest.mark.parametrize("delta", [0.5, -0.5, 0.75])
    def test_perturb_leaving_open_interval_rejected(self, delta):
        g = WeightedDigraph(n=2, edges={(0, 1): 0.5})
        with pytest.raises(EditRejectedError):
            apply_edit(g, GraphEdit.perturb(0, 1, delta))

    def test_out_of_range_edit(self, chain3):
        with pytest.raises(EditRejectedError):
            apply_edit(chain3, GraphEdit.add(0, 5, 1.0))


class TestSemiring:
    def test_union_of_two_k2(self):
        k2 = generate(GraphKind.COMPLETE, 2)
        u = disjoint_union(k2, k2)
        assert u.n == 4
        assert sorted(u.edges) == [(0, 1), (1, 0), (2, 3), (3, 2)]

    def test_union_mixed_self_loop_flags(self):
        g1 = WeightedDigraph(n=1)
        g2 = WeightedDigraph(n=1, implicit_self_loops=False)
        u = disjoint_union(g1, g2)
        assert not u.implicit_self_loops
        assert u.weight(0, 0) == 1.0
        assert u.weight(1, 1) is None

    def test_product_of_two_k2(self):
        k2 = generate(GraphKind.COMPLETE, 2)
        product = cartesian_product(k2, k2)
        assert product.n == 4
        assert len(product.non_self_edges()) == 8
        # (0,0) -> (0,1) and (0,0) -> (1,0); never both coordinates at once
        assert product.has_edge(0, 1) and product.has_edge(0, 2)
        assert not product.has_edge(0, 3)

    def test_product_inherits_weights(self):
        g1 = WeightedDigraph(n=2, edges={(0, 1): 0.5})
        g2 = WeightedDigraph(n=2, edges={(1, 0): 0.25})
        product = cartesian_product(g1, g2)
        assert product.weight(0, 2) == 0.5
        assert product.weight(1, 0) == 0.25

    def test_transitive_closure(self, chain3):
        closed = transitive_closure(chain3)
        assert closed.weight(0, 2) == 1.0
        assert closed.weight(2, 0) is None
        assert transitive_closure(closed) == closed

    def test_symmetrize_and_upper(self, chain3):
        sym = symmetrize(chain3)
        assert is_symmetric(sym)
        assert not is_symmetric(chain3)
        assert upper(sym) == chain3


class TestGenerators:
    def test_null_and_complete(self):
        assert generate(GraphKind.NULL, 5).edges == {}
        assert len(generate(GraphKind.COMPLETE, 3).edges) == 6

    def test_stars(self):
        assert sorted(generate(GraphKind.STAR_OUT, 4).edges) == [(0, 1), (0, 2), (0, 3)]
        assert sorted(generate(GraphKind.STAR_IN, 3).edges) == [(1, 0), (2, 0)]

    def test_poset_chain_is_comparability(self):
        g = generate(GraphKind.POSET_CHAIN, 4)
        assert sorted(g.edges) == [(j, i) for j in range(4) for i in range(4) if j < i]

    def test_cycle(self):
        assert sorted(generate(GraphKind.CYCLE, 3).edges) == [(0, 1), (1, 2), (2, 0)]

    def test_grid(self):
        g = generate(GraphKind.GRID2D, rows=2, cols=3)
        assert g.n == 6
        assert len(g.edges) == 2 * 7
        assert is_symmetric(g)

    def test_ring_lattice_degree(self):
        g = generate(GraphKind.WATTS_STROGATZ, 64, k=10, beta=0.0)
        degrees = np.bincount([j for j, _ in g.edges], minlength=64)
        assert np.all(degrees == 10)

    def test_rewiring_is_seed_deterministic(self):
        a = generate(GraphKind.WATTS_STROGATZ, 64, k=4, beta=0.2, seed=3)
        b = generate(GraphKind.WATTS_STROGATZ, 64, k=4, beta=0.2, seed=3)
        c = generate(GraphKind.WATTS_STROGATZ, 64, k=4, beta=0.2, seed=4)
        assert a == b
        assert a != c
        assert len(a.edges) == 64 * 4

    def test_upper_orientation(self):
        g = generate(GraphKind.WATTS_STROGATZ, 16, k=4, beta=0.0, orientation=Orientation.UPPER)
        assert all(j < i for j, i in g.edges)
        assert len(g.edges) == 32

    def test_watts_strogatz_rejects_odd_k(self):
        with pytest.raises(InvalidParameterError):
            generate(GraphKind.WATTS_STROGATZ, 64, k=5, beta=0.2)

    def test_random_sparse(self):
        g = generate(GraphKind.RANDOM_SPARSE, 60, m=90, seed=1)
        assert len(g.edges) == 180
        assert g == generate(GraphKind.RANDOM_SPARSE, 60, m=90, seed=1)

    def test_buckyball_is_cubic(self):
        pairs = buckyball_pairs()
        assert len(pairs) == 90
        g = generate(GraphKind.BUCKYBALL)
        assert g.n == 60
        assert np.all(np.bincount([j for j, _ in g.edges], minlength=60) == 3)

    def test_weight_out_of_range(self):
        with pytest.raises(InvalidParameterError):
            generate(GraphKind.COMPLETE, 3, weight=0.0)
