"""
Graph and Points File I/O

JSON graph documents ({"n", "implicit_self_loops", "edges": [[j, i, p], ...]})
and CSV point files (one product point per row).
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
from pydantic import ValidationError

from app.core.exceptions import GraphFormatError
from app.models.graph import GraphDocument, WeightedDigraph

PathLike = Union[str, Path]


def graph_from_document(document: Union[GraphDocument, Dict[str, Any]], path: str = "<document>") -> WeightedDigraph:
    """Validate a graph document; rejects duplicate edges and bad weights."""
    try:
        doc = document if isinstance(document, GraphDocument) else GraphDocument.model_validate(document)
    except ValidationError as e:
        raise GraphFormatError(f"invalid graph document: {e.error_count()} errors", path=path,
                               details={"errors": e.errors(include_url=False)}) from e

    edges: Dict[tuple, float] = {}
    for j, i, p in doc.edges:
        if (j, i) in edges:
            raise GraphFormatError(f"duplicate edge ({j}, {i})", path=path)
        edges[(j, i)] = p

    try:
        return WeightedDigraph(n=doc.n, edges=edges, implicit_self_loops=doc.implicit_self_loops)
    except ValidationError as e:
        raise GraphFormatError(str(e.errors(include_url=False)[0]["msg"]), path=path) from e


def graph_to_document(g: WeightedDigraph) -> GraphDocument:
    """Document form with edges sorted by (j, i)."""
    return GraphDocument(
        n=g.n,
        implicit_self_loops=g.implicit_self_loops,
        edges=g.sorted_edges(),
    )


def read_graph(path: PathLike) -> WeightedDigraph:
    """Load a graph JSON file."""
    path = Path(path)
    try:
        document = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GraphFormatError(f"cannot read graph file: {e}", path=str(path)) from e
    return graph_from_document(document, path=str(path))


def dumps_graph(g: WeightedDigraph) -> str:
    """Byte-stable JSON text for a graph."""
    return json.dumps(graph_to_document(g).model_dump(), separators=(", ", ": ")) + "\n"


def write_graph(g: WeightedDigraph, path: PathLike) -> Path:
    """Write a graph JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps_graph(g))
    return path


def read_points(path: PathLike) -> np.ndarray:
    """CSV with one product point per row; '#' starts a comment."""
    path = Path(path)
    try:
        points = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, dtype=float)
    except (OSError, ValueError) as e:
        raise GraphFormatError(f"cannot read points file: {e}", path=str(path)) from e
    return points
