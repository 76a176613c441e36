"""
Experiment Data Models

Pydantic models for sampling specifications and distribution summaries.
"""

from enum import Enum
from typing import Dict, List, Optional

from pydantic import BaseModel, Field


class SampleSource(str, Enum):
    """Where product points are drawn from."""

    CUBE_VOLUME = "cube-volume"  # uniform on [0,1]^N
    CUBE_VERTICES = "cube-vertices"  # uniform on {0,1}^N


class DistributionKind(str, Enum):
    DISTANCE = "distance"
    LOG_RATIO = "log-ratio"


class ExportFormat(str, Enum):
    CSV = "csv"
    JSON = "json"
    SVG = "svg"


class SampleSpec(BaseModel):
    """Seeded pair-sampling specification."""

    source: SampleSource = SampleSource.CUBE_VOLUME
    pair_count: int = Field(default=100_000, ge=1)
    seed: int = Field(default=0, ge=0)
    # None = automatic: enumerate every binary pair when small enough.
    exhaustive: Optional[bool] = None


class DistributionSummary(BaseModel):
    """Histogram plus moments of sampled distances or log-distance-ratios."""

    kind: DistributionKind = DistributionKind.DISTANCE
    label: str = ""
    bin_edges: List[float]
    counts: List[int]
    mean: float = 0.0
    variance: float = 0.0
    min: float = 0.0
    max: float = 0.0
    count: int = 0

    # Provenance
    seed: int = 0
    source: SampleSource = SampleSource.CUBE_VOLUME
    exhaustive: bool = False

    # Pairs with d_null = 0, dropped from log-distance-ratios
    excluded: int = 0
    sandwich_violations: int = 0


class ReferenceDistributions(BaseModel):
    """Distance histograms of one pair set on g, its null graph and its full graph."""

    d: DistributionSummary
    d_null: DistributionSummary
    d_full: DistributionSummary

    def series(self) -> Dict[str, DistributionSummary]:
        return {"d": self.d, "d_null": self.d_null, "d_full": self.d_full}
