"""
Metric Core Service

Single-factor metrics, normalization, the exponent-weighted product metric
and the log-domain transform the joint metric is computed in.
"""

from pathlib import Path
from typing import Literal, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from app.core.exceptions import (
    GraphFormatError,
    InvalidParameterError,
    SaturatedDistanceError,
    SymmetryError,
)
from app.core.logging import get_logger
from app.models.metric import (
    ElementalMetric,
    ExponentVector,
    MetricKind,
    ProductPoint,
    RawDistance,
)

logger = get_logger(__name__)

ComputeMethod = Literal["log", "direct"]


# =============================================================================
# Factories
# =============================================================================

def half_absolute_metric() -> ElementalMetric:
    """(1/2)|x - y|, capped at 1 (complex inputs allowed)."""
    return ElementalMetric(kind=MetricKind.HALF_ABSOLUTE)


def discrete_metric() -> ElementalMetric:
    """0 if equal, 1 otherwise."""
    return ElementalMetric(kind=MetricKind.DISCRETE)


def table_metric(matrix: Sequence[Sequence[float]]) -> ElementalMetric:
    """
    Finite metric space given by an explicit distance matrix.

    Rejects non-square, asymmetric, out-of-range and non-zero-diagonal tables.
    """
    table = np.asarray(matrix, dtype=float)
    if table.ndim != 2 or table.shape[0] != table.shape[1] or table.shape[0] == 0:
        raise InvalidParameterError("distance table must be a non-empty square matrix",
                                    {"shape": list(table.shape)})
    if np.any(~np.isfinite(table)) or np.any(table < 0) or np.any(table > 1):
        raise InvalidParameterError("distance table entries must lie in [0, 1]")
    if np.any(np.diag(table) != 0):
        raise InvalidParameterError("distance table must have a zero diagonal")
    if not np.array_equal(table, table.T):
        raise SymmetryError("distance table is not symmetric")
    return ElementalMetric(
        kind=MetricKind.TABLE,
        table=tuple(tuple(float(v) for v in row) for row in table),
    )


def read_distance_table(path: Union[str, Path]) -> ElementalMetric:
    """Load a table-backed metric from CSV: first line ``n``, then n rows of n values."""
    path = Path(path)
    try:
        lines = [line.strip() for line in path.read_text().splitlines() if line.strip()]
    except OSError as e:
        raise GraphFormatError(f"cannot read distance table: {e}", path=str(path)) from e

    if not lines:
        raise GraphFormatError("empty distance table", path=str(path))
    try:
        n = int(lines[0])
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
    except ValueError as e:
        raise GraphFormatError(f"malformed distance table: {e}", path=str(path)) from e
    if len(rows) != n or any(len(row) != n for row in rows):
        raise GraphFormatError(f"expected {n} rows of {n} values", path=str(path))
    return table_metric(rows)


def normalize_metric(
    d: Optional[RawDistance] = None,
    mode: Literal["bounded", "unbounded"] = "unbounded",
    supremum: Optional[float] = None,
) -> ElementalMetric:
    """
    Rescale a raw metric into [0, 1].

    bounded:   d / supremum
    unbounded: d / (1 + d)

    The raw distance defaults to |x - y|.
    """
    if mode == "bounded":
        if supremum is None or not np.isfinite(supremum) or supremum <= 0:
            raise InvalidParameterError(
                "bounded normalization requires a positive supremum",
                {"supremum": supremum},
            )
        return ElementalMetric(kind=MetricKind.BOUNDED_RESCALED, supremum=float(supremum), raw=d)
    if mode == "unbounded":
        return ElementalMetric(kind=MetricKind.UNBOUNDED_RESCALED, raw=d)
    raise InvalidParameterError(f"unknown normalization mode: {mode}")


# =============================================================================
# Log domain
# =============================================================================

def log_domain_transform(v: float) -> float:
    """-log(1 - v) for v in [0, 1); v = 1 is a saturated distance."""
    if not np.isfinite(v) or v < 0 or v > 1:
        raise InvalidParameterError("value must lie in [0, 1]", {"value": v})
    if v == 1:
        raise SaturatedDistanceError("distance 1 has no log-domain image", {"value": v})
    return float(-np.log1p(-v))


def subadditive_transform(t: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
    """f(t) = 1 - exp(-t), the inverse of the log-domain transform."""
    result = -np.expm1(-np.asarray(t, dtype=float))
    return float(result) if result.ndim == 0 else result


def log_complement(d: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Return (log(1 - d) with saturated entries set to 0, saturated mask).

    Saturated entries (d == 1) must be handled by the caller.
    """
    d = np.asarray(d, dtype=float)
    saturated = d >= 1.0
    safe = np.where(saturated, 0.0, d)
    return np.log1p(-safe), saturated


# =============================================================================
# Evaluation
# =============================================================================

def elemental_distances(
    metrics: Sequence[ElementalMetric],
    x: np.ndarray,
    y: np.ndarray,
) -> np.ndarray:
    """
    Evaluate every factor metric column-wise.

    x, y: shape (N,) or (pairs, N). Returns float array of the same shape.
    """
    xa = np.asarray(x)
    ya = np.asarray(y)
    if xa.shape != ya.shape:
        raise InvalidParameterError("points have different shapes",
                                    {"x": list(xa.shape), "y": list(ya.shape)})
    single = xa.ndim == 1
    if single:
        xa = xa[np.newaxis, :]
        ya = ya[np.newaxis, :]
    if xa.ndim != 2 or xa.shape[1] != len(metrics):
        raise InvalidParameterError(
            f"points must have {len(metrics)} coordinates",
            {"shape": list(xa.shape)},
        )

    out = np.empty(xa.shape, dtype=float)
    for i, metric in enumerate(metrics):
        out[:, i] = metric.evaluate(xa[:, i], ya[:, i])
    return out[0] if single else out


def _as_exponents(a: Union[ExponentVector, Sequence[float]]) -> np.ndarray:
    if isinstance(a, ExponentVector):
        return np.asarray(a.a, dtype=float)
    try:
        return np.asarray(ExponentVector(a=tuple(float(v) for v in a)).a, dtype=float)
    except ValidationError as e:
        raise InvalidParameterError("invalid exponent vector", {"errors": e.errors()}) from e


def weighted_product_distance(
    x: ProductPoint,
    y: ProductPoint,
    metrics: Sequence[ElementalMetric],
    a: Union[ExponentVector, Sequence[float]],
    method: ComputeMethod = "log",
) -> float:
    """1 - prod_i (1 - d_i(x_i, y_i))^{a_i}, a metric with values in [0, 1]."""
    exponents = _as_exponents(a)
    if not (len(x) == len(y) == len(metrics) == len(exponents)):
        raise InvalidParameterError(
            "length mismatch between points, metrics and exponents",
            {"x": len(x), "y": len(y), "metrics": len(metrics), "a": len(exponents)},
        )

    d = elemental_distances(metrics, np.asarray(x), np.asarray(y))
    if method == "direct":
        return float(1.0 - np.prod((1.0 - d) ** exponents))

    logs, saturated = log_complement(d)
    if saturated.any():
        return 1.0
    return float(subadditive_transform(-np.dot(exponents, logs)))


def triangle_violation(
    metric: ElementalMetric,
    x: np.ndarray,
    y: np.ndarray,
    z: np.ndarray,
) -> float:
    """Largest d(x,z) - d(x,y) - d(y,z) over sampled triples (<= 0 when it holds)."""
    dxz = np.asarray(metric.evaluate(x, z))
    dxy = np.asarray(metric.evaluate(x, y))
    dyz = np.asarray(metric.evaluate(y, z))
    return float(np.max(dxz - dxy - dyz))
