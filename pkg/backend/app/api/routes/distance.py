"""
Distance Route

Evaluate the joint metric for point pairs on a posted graph.
"""

from typing import List, Literal, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.models.graph import GraphDocument
from app.services.graph_io import graph_from_document
from app.services.joint_metric import joint_distances, make_space, reference_graphs
from app.services.metric_core import discrete_metric, half_absolute_metric

router = APIRouter()


class DistanceRequest(BaseModel):
    """Aligned rows of x and y; one distance per row."""

    graph: GraphDocument
    x: List[List[float]] = Field(min_length=1)
    y: List[List[float]] = Field(min_length=1)
    metric: Literal["half-absolute", "discrete"] = "half-absolute"
    method: Literal["log", "direct"] = "log"
    include_references: bool = False


class DistanceResponse(BaseModel):
    distances: List[float]
    d_null: Optional[List[float]] = None
    d_full: Optional[List[float]] = None


@router.post("/distance", response_model=DistanceResponse)
def compute_distance(request: DistanceRequest):
    """Joint distance for every (x[k], y[k]), optionally with d_null and d_full."""
    graph = graph_from_document(request.graph)
    factory = discrete_metric if request.metric == "discrete" else half_absolute_metric
    space = make_space(graph, [factory() for _ in range(graph.n)])

    distances = joint_distances(space, request.x, request.y, method=request.method)
    response = DistanceResponse(distances=distances.tolist())
    if request.include_references:
        null, full = reference_graphs(graph)
        response.d_null = joint_distances(space.with_graph(null), request.x, request.y).tolist()
        response.d_full = joint_distances(space.with_graph(full), request.x, request.y).tolist()
    return response
