"""Models package."""

from app.models.experiment import (
    DistributionKind,
    DistributionSummary,
    ExportFormat,
    SampleSource,
    SampleSpec,
)
from app.models.graph import (
    EditKind,
    GraphDocument,
    GraphEdit,
    GraphKind,
    Orientation,
    WeightedDigraph,
)
from app.models.graphon import (
    EstimatorConfig,
    EstimatorMode,
    Graphon,
    GraphonEstimate,
    GraphonKind,
    PathFunction,
    PathKind,
    WeightDiagnostics,
)
from app.models.joint import DistancePair, JointMetricSpace, ProductLawReport, UnionDecomposition
from app.models.metric import ElementalMetric, ExponentVector, MetricKind
from app.models.verification import Law, VerificationReport

__all__ = [
    # Metric
    "MetricKind",
    "ElementalMetric",
    "ExponentVector",
    # Graph
    "WeightedDigraph",
    "EditKind",
    "GraphEdit",
    "GraphKind",
    "Orientation",
    "GraphDocument",
    # Joint
    "JointMetricSpace",
    "DistancePair",
    "UnionDecomposition",
    "ProductLawReport",
    # Graphon
    "GraphonKind",
    "Graphon",
    "PathKind",
    "PathFunction",
    "EstimatorMode",
    "EstimatorConfig",
    "GraphonEstimate",
    "WeightDiagnostics",
    # Experiment
    "SampleSource",
    "SampleSpec",
    "DistributionKind",
    "DistributionSummary",
    "ExportFormat",
    # Verification
    "Law",
    "VerificationReport",
]
