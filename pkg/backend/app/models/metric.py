"""
Elemental Metric Models

Pydantic models for single-factor metrics and exponent vectors.
"""

from enum import Enum
from typing import Any, Callable, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator

from app.core.exceptions import InvalidParameterError

# A point of X_1 x ... x X_N: one coordinate per factor space.
ProductPoint = Sequence[Any]

RawDistance = Callable[[np.ndarray, np.ndarray], np.ndarray]


class MetricKind(str, Enum):
    """Kinds of normalized factor metrics."""

    HALF_ABSOLUTE = "half-absolute"
    DISCRETE = "discrete"
    BOUNDED_RESCALED = "bounded-rescaled"
    UNBOUNDED_RESCALED = "unbounded-rescaled"
    TABLE = "table"


def _absolute_difference(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    return np.abs(x - y)


class ElementalMetric(BaseModel):
    """
    A normalized distance d_i: X_i x X_i -> [0, 1].

    Build instances through the factories in ``app.services.metric_core``;
    they validate the kind-specific parameters.
    """

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    kind: MetricKind
    supremum: Optional[float] = Field(default=None, gt=0)
    table: Optional[Tuple[Tuple[float, ...], ...]] = None
    raw: Optional[RawDistance] = Field(default=None, exclude=True, repr=False)

    @property
    def is_binary(self) -> bool:
        """True when every value the metric can take is 0 or 1."""
        if self.kind == MetricKind.DISCRETE:
            return True
        if self.kind == MetricKind.TABLE and self.table is not None:
            return all(v in (0.0, 1.0) for row in self.table for v in row)
        return False

    @property
    def size(self) -> Optional[int]:
        """Number of points of a table-backed space."""
        return len(self.table) if self.table is not None else None

    def _raw_distance(self, xa: np.ndarray, ya: np.ndarray) -> np.ndarray:
        raw = self.raw or _absolute_difference
        t = np.asarray(raw(xa, ya), dtype=float)
        if np.any(t < 0) or not np.all(np.isfinite(t)):
            raise InvalidParameterError(
                "raw distance must be finite and non-negative",
                {"kind": self.kind.value, "min": float(np.min(t)) if t.size else None},
            )
        return t

    def _table_index(self, points: np.ndarray) -> np.ndarray:
        n = len(self.table or ())
        if points.size and points.dtype.kind not in "biuf":
            raise InvalidParameterError("table points must be integer indices")
        index = np.asarray(points, dtype=float)
        bad = (index != np.round(index)) | (index < 0) | (index >= n)
        if np.any(bad):
            raise InvalidParameterError(
                f"table points must be integers in 0..{n - 1}",
                {"offending": [float(v) for v in np.atleast_1d(index[bad])[:5]]},
            )
        return index.astype(int)

    def evaluate(self, x: Any, y: Any) -> Union[float, np.ndarray]:
        """Distance between x and y, elementwise over arrays."""
        xa = np.asarray(x)
        ya = np.asarray(y)

        if self.kind == MetricKind.HALF_ABSOLUTE:
            d = np.minimum(1.0, np.abs(xa - ya) / 2.0)
        elif self.kind == MetricKind.DISCRETE:
            d = (xa != ya).astype(float)
        elif self.kind == MetricKind.BOUNDED_RESCALED:
            d = np.minimum(1.0, self._raw_distance(xa, ya) / self.supremum)
        elif self.kind == MetricKind.UNBOUNDED_RESCALED:
            t = self._raw_distance(xa, ya)
            d = t / (1.0 + t)
        else:
            matrix = np.asarray(self.table, dtype=float)
            d = matrix[self._table_index(xa), self._table_index(ya)]

        d = np.asarray(d, dtype=float)
        if d.ndim == 0:
            return float(d)
        return d


class ExponentVector(BaseModel):
    """Exponents a_i >= 1 of the weighted product metric."""

    model_config = ConfigDict(frozen=True)

    a: Tuple[float, ...]

    @field_validator("a")
    @classmethod
    def _at_least_one(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        if not value:
            raise ValueError("exponent vector must not be empty")
        if any(not np.isfinite(v) or v < 1 for v in value):
            raise ValueError("every exponent must be a finite real >= 1")
        return value

    def __len__(self) -> int:
        return len(self.a)
