"""
Graphon Route

Graphon-limit distance on the step graphon of a posted graph.
"""

from typing import Any, Dict, Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.models.graph import GraphDocument
from app.models.graphon import EstimatorConfig, EstimatorMode, GraphonEstimate
from app.services.graph_io import graph_from_document
from app.services.graphon import graphon_distance, path_from_spec, step_graphon

router = APIRouter()


class GraphonRequest(BaseModel):
    """Path functions use the CLI's JSON form (constant or piecewise)."""

    graph: GraphDocument
    g: Dict[str, Any]
    h: Dict[str, Any]
    mode: EstimatorMode = EstimatorMode.GRID
    samples_x: Optional[int] = Field(default=None, ge=1)
    samples_y: Optional[int] = Field(default=None, ge=1)
    resolution: Optional[int] = Field(default=None, ge=2)
    seed: int = Field(default=0, ge=0)
    floor: Optional[float] = Field(default=None, gt=0, le=1)


@router.post("/graphon", response_model=GraphonEstimate)
def estimate_graphon_distance(request: GraphonRequest):
    W = step_graphon(graph_from_document(request.graph), floor=request.floor)
    overrides = request.model_dump(include={"samples_x", "samples_y", "resolution"}, exclude_none=True)
    cfg = EstimatorConfig(mode=request.mode, seed=request.seed, **overrides)
    return graphon_distance(W, path_from_spec(request.g), path_from_spec(request.h), cfg)
