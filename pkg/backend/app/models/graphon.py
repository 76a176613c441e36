"""
Graphon Data Models

Kernels, path functions and estimator configuration for the graphon-limit distance.
"""

from enum import Enum
from typing import Any, Callable, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.core.config import settings
from app.models.metric import ElementalMetric, MetricKind

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]
PathEvaluator = Callable[[np.ndarray], np.ndarray]


class GraphonKind(str, Enum):
    CONSTANT = "constant"
    STEP = "step"
    USER = "user"


class Graphon(BaseModel):
    """Symmetric kernel W: [0,1]^2 -> [floor, 1]."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: GraphonKind
    kernel: Kernel = Field(exclude=True, repr=False)
    floor: float = Field(default=1e-6, gt=0, le=1)
    # Cell values for step graphons, row i / column j on I_i x I_j.
    cells: Optional[Tuple[Tuple[float, ...], ...]] = None

    def __call__(self, x: Any, y: Any) -> np.ndarray:
        values = np.asarray(self.kernel(np.asarray(x, dtype=float), np.asarray(y, dtype=float)), dtype=float)
        return np.clip(values, self.floor, 1.0)


class PathKind(str, Enum):
    CONSTANT = "constant"
    PIECEWISE = "piecewise"
    USER = "user"


class PathFunction(BaseModel):
    """Complex-valued function g: [0, 1] -> C."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: PathKind
    evaluator: PathEvaluator = Field(exclude=True, repr=False)
    breakpoints: Optional[Tuple[float, ...]] = None
    # (re, im) per piece
    values: Optional[Tuple[Tuple[float, float], ...]] = None

    def __call__(self, t: Any) -> np.ndarray:
        return np.asarray(self.evaluator(np.asarray(t, dtype=float)), dtype=complex)


class EstimatorMode(str, Enum):
    MONTE_CARLO = "monte-carlo"
    GRID = "grid"


def _default_elemental() -> ElementalMetric:
    return ElementalMetric(kind=MetricKind.HALF_ABSOLUTE)


class EstimatorConfig(BaseModel):
    """Discretization of the outer/inner expectations."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    mode: EstimatorMode = EstimatorMode.GRID
    samples_x: int = Field(default_factory=lambda: settings.graphon_outer_samples, ge=1)
    samples_y: int = Field(default_factory=lambda: settings.graphon_inner_samples, ge=1)
    resolution: int = Field(default=256, ge=2)
    seed: int = Field(default=0, ge=0)
    elemental: ElementalMetric = Field(default_factory=_default_elemental)
    # Clamp sampled distances below 1 instead of failing on a saturated log.
    clamp_saturated: bool = True

    @model_validator(mode="after")
    def _elemental_is_normalized(self) -> "EstimatorConfig":
        if self.elemental.kind == MetricKind.TABLE:
            raise ValueError("graphon elemental metric must act on complex values")
        return self

    @model_validator(mode="after")
    def _standard_error_is_defined(self) -> "EstimatorConfig":
        if self.mode == EstimatorMode.MONTE_CARLO and self.samples_x < 2:
            raise ValueError("monte-carlo mode needs at least 2 outer samples for a standard error")
        return self


class GraphonEstimate(BaseModel):
    """Estimator output, serialized as the CLI's JSON record."""

    estimate: float
    std_error: Optional[float] = None
    bias: Optional[float] = None
    mode: EstimatorMode
    samples: int


class WeightDiagnostics(BaseModel):
    """Conditional reformulation p_{j|i} of a finite weight matrix."""

    conditional: List[List[float]]
    marginals: List[float]
