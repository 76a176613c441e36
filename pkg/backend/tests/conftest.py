"""Shared fixtures for the graphmetric test suite."""

import io
import json
from pathlib import Path
from typing import Callable

import numpy as np
import pytest

from app.core.logging import setup_logging
from app.models.graph import GraphKind, WeightedDigraph
from app.models.joint import JointMetricSpace
from app.services.digraph import generate
from app.services.graph_io import write_graph
from app.services.joint_metric import make_space
from app.services.metric_core import discrete_metric, half_absolute_metric


@pytest.fixture(autouse=True)
def quiet_logging() -> None:
    """Route logs to a private buffer; captured streams close between tests."""
    setup_logging("WARNING", stream=io.StringIO())


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture
def half_space() -> Callable[[WeightedDigraph], JointMetricSpace]:
    """Joint space with half-absolute metrics on every factor."""

    def build(graph: WeightedDigraph) -> JointMetricSpace:
        return make_space(graph, [half_absolute_metric() for _ in range(graph.n)])

    return build


@pytest.fixture
def binary_space() -> Callable[[WeightedDigraph], JointMetricSpace]:
    """Joint space with discrete metrics on every factor."""

    def build(graph: WeightedDigraph) -> JointMetricSpace:
        return make_space(graph, [discrete_metric() for _ in range(graph.n)])

    return build


@pytest.fixture
def chain3() -> WeightedDigraph:
    """Edges 0 -> 1 -> 2."""
    return generate(GraphKind.CHAIN, 3)


@pytest.fixture
def graph_file(tmp_path: Path) -> Callable[[WeightedDigraph, str], Path]:
    def write(graph: WeightedDigraph, name: str = "graph.json") -> Path:
        return write_graph(graph, tmp_path / name)

    return write


@pytest.fixture
def points_file(tmp_path: Path) -> Callable[[np.ndarray, str], Path]:
    def write(rows: np.ndarray, name: str = "points.csv") -> Path:
        path = tmp_path / name
        np.savetxt(path, np.atleast_2d(rows), delimiter=",")
        return path

    return write


@pytest.fixture
def json_file(tmp_path: Path) -> Callable[[dict, str], Path]:
    def write(payload: dict, name: str) -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload))
        return path

    return write
