"""
Experiment Route

Distance and log-distance-ratio distributions over a posted graph.
"""

from typing import Optional

from fastapi import APIRouter
from pydantic import BaseModel, Field

from app.models.experiment import DistributionKind, DistributionSummary, SampleSpec
from app.models.graph import GraphDocument
from app.services.experiment import run_experiment
from app.services.graph_io import graph_from_document

router = APIRouter()


class ExperimentRequest(BaseModel):
    graph: GraphDocument
    spec: SampleSpec = Field(default_factory=lambda: SampleSpec(pair_count=10_000))
    kind: DistributionKind = DistributionKind.DISTANCE
    bins: Optional[int] = Field(default=None, ge=1)
    label: str = ""


@router.post("/experiment", response_model=DistributionSummary)
def run_distribution(request: ExperimentRequest):
    """Histogram summary; identical requests return identical summaries."""
    graph = graph_from_document(request.graph)
    return run_experiment(graph, request.spec, request.kind, request.bins, label=request.label)
