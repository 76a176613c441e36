"""
Joint Metric Models

Pydantic models for joint metric spaces and their decomposition records.
"""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.models.graph import WeightedDigraph
from app.models.metric import ElementalMetric

# Slack for d_null <= d <= d_full under floating-point rounding.
SANDWICH_TOL = 1e-12


class JointMetricSpace(BaseModel):
    """A weighted digraph bundled with one elemental metric per vertex."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    graph: WeightedDigraph
    metrics: Tuple[ElementalMetric, ...]

    @model_validator(mode="after")
    def _one_metric_per_vertex(self) -> "JointMetricSpace":
        if len(self.metrics) != self.graph.n:
            raise ValueError(
                f"{len(self.metrics)} metrics for a graph with {self.graph.n} vertices"
            )
        return self

    @property
    def n(self) -> int:
        return self.graph.n

    def with_graph(self, graph: WeightedDigraph) -> "JointMetricSpace":
        """Same metrics over another graph on the same vertex count."""
        return JointMetricSpace(graph=graph, metrics=self.metrics)


class DistancePair(BaseModel):
    """A point pair evaluated on the null and the complete graph."""

    model_config = ConfigDict(frozen=True)

    d_null: float = Field(ge=0, le=1)
    d_full: float = Field(ge=0, le=1)

    @model_validator(mode="after")
    def _null_below_full(self) -> "DistancePair":
        if self.d_null > self.d_full + SANDWICH_TOL:
            raise ValueError(f"d_null={self.d_null} exceeds d_full={self.d_full}")
        return self


class UnionDecomposition(BaseModel):
    """Disjoint-union law: joint distance vs the size-weighted mean of the parts."""

    lhs: float
    rhs: float
    parts: List[float] = Field(default_factory=list)
    sizes: List[int] = Field(default_factory=list)

    @property
    def gap(self) -> float:
        return abs(self.lhs - self.rhs)


class ProductLawReport(BaseModel):
    """Cartesian-product diagnostics; not an asserted identity."""

    lhs: float
    rhs_as_printed: float
    normalization_used: str
    d1: float
    d2: float
    n1: int
    n2: int
