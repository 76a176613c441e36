"""
Graphon Service

Step graphons from finite graphs and the graphon-limit distance

    1 - E_x[ exp( E_y[ log(1 - d(g(y), h(y))) / W(x, y) ] ) ]

estimated by nested Monte Carlo or by midpoint quadrature, with uniform
marginals on [0, 1].
"""

from typing import Any, Callable, Dict, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, SaturatedDistanceError, SymmetryError
from app.core.logging import get_logger
from app.core.parallel import block_ranges, parallel_map
from app.core.rng import LANE_GRAPHON, stream
from app.models.graph import WeightedDigraph
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
from app.services.digraph import is_symmetric

logger = get_logger(__name__)


# =============================================================================
# Kernels
# =============================================================================

def constant_graphon(c: float, floor: Optional[float] = None) -> Graphon:
    """W(x, y) = c for c in (0, 1]."""
    if not 0.0 < c <= 1.0:
        raise InvalidParameterError("constant graphon value must lie in (0, 1]", {"c": c})

    def kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return np.full(np.broadcast(x, y).shape, c, dtype=float)

    return Graphon(kind=GraphonKind.CONSTANT, kernel=kernel,
                   floor=floor or settings.graphon_floor, cells=((c,),))


def cell_index(u: np.ndarray, n: int) -> np.ndarray:
    """Index k of the interval I_k = [k/n, (k+1)/n) holding u; 1 maps to n-1."""
    return np.minimum(np.floor(np.asarray(u) * n).astype(int), n - 1)


def step_graphon(g: WeightedDigraph, floor: Optional[float] = None) -> Graphon:
    """
    Piecewise-constant kernel of a symmetric graph: W = p_ij on I_i x I_j.

    Cells of absent edges take the floor; the diagonal follows the self-loops.
    """
    if not is_symmetric(g):
        raise SymmetryError("step graphon requires a symmetric weighted graph")
    floor = floor or settings.graphon_floor

    cells = np.full((g.n, g.n), floor, dtype=float)
    for i in range(g.n):
        for j in range(g.n):
            p = g.weight(i, j)
            if p is not None:
                cells[i, j] = p
    n = g.n

    def kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return cells[cell_index(x, n), cell_index(y, n)]

    return Graphon(
        kind=GraphonKind.STEP,
        kernel=kernel,
        floor=floor,
        cells=tuple(tuple(float(v) for v in row) for row in cells),
    )


def user_graphon(fn: Callable[[np.ndarray, np.ndarray], np.ndarray], floor: Optional[float] = None) -> Graphon:
    """Wrap a user kernel, symmetrised as (W(x,y) + W(y,x)) / 2."""

    def kernel(x: np.ndarray, y: np.ndarray) -> np.ndarray:
        return 0.5 * (np.asarray(fn(x, y), dtype=float) + np.asarray(fn(y, x), dtype=float))

    return Graphon(kind=GraphonKind.USER, kernel=kernel, floor=floor or settings.graphon_floor)


# =============================================================================
# Path functions
# =============================================================================

def _as_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise InvalidParameterError("complex values are [re, im] pairs", {"value": list(value)})
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def constant_path(value: Any) -> PathFunction:
    v = _as_complex(value)

    def evaluator(t: np.ndarray) -> np.ndarray:
        return np.full(np.shape(t), v, dtype=complex)

    return PathFunction(kind=PathKind.CONSTANT, evaluator=evaluator, values=((v.real, v.imag),))


def piecewise_path(breakpoints: Sequence[float], values: Sequence[Any]) -> PathFunction:
    """g(t) = values[k] on [breakpoints[k], breakpoints[k+1])."""
    bps = np.asarray(breakpoints, dtype=float)
    if len(bps) < 2 or bps[0] != 0.0 or bps[-1] != 1.0 or np.any(np.diff(bps) <= 0):
        raise InvalidParameterError(
            "breakpoints must increase strictly from 0 to 1", {"breakpoints": list(breakpoints)}
        )
    if len(values) != len(bps) - 1:
        raise InvalidParameterError(
            f"{len(bps) - 1} values required for {len(bps)} breakpoints", {"values": len(values)}
        )
    vals = np.asarray([_as_complex(v) for v in values], dtype=complex)

    def evaluator(t: np.ndarray) -> np.ndarray:
        index = np.clip(np.searchsorted(bps, t, side="right") - 1, 0, len(vals) - 1)
        return vals[index]

    return PathFunction(
        kind=PathKind.PIECEWISE,
        evaluator=evaluator,
        breakpoints=tuple(float(b) for b in bps),
        values=tuple((v.real, v.imag) for v in vals),
    )


def user_path(fn: Callable[[np.ndarray], np.ndarray]) -> PathFunction:
    return PathFunction(kind=PathKind.USER, evaluator=fn)


def path_from_spec(spec: Dict[str, Any]) -> PathFunction:
    """Build a path function from its JSON form."""
    kind = spec.get("kind")
    if kind == PathKind.CONSTANT.value:
        return constant_path(spec["value"])
    if kind == PathKind.PIECEWISE.value:
        return piecewise_path(spec["breakpoints"], spec["values"])
    raise InvalidParameterError(f"unknown path function kind: {kind}", {"spec": spec})


# =============================================================================
# Estimator
# =============================================================================

def _sampled_distances(g: PathFunction, h: PathFunction, y: np.ndarray, cfg: EstimatorConfig) -> np.ndarray:
    d = np.asarray(cfg.elemental.evaluate(g(y), h(y)), dtype=float)
    saturated = d >= 1.0
    if saturated.any():
        if not cfg.clamp_saturated:
            y_bad = float(np.asarray(y)[np.argmax(saturated)])
            raise SaturatedDistanceError(
                "elemental distance reached 1 inside the log",
                {"y": y_bad},
            )
        d = np.minimum(d, 1.0 - settings.saturation_clamp)
    return d


def _grid_estimate(W: Graphon, g: PathFunction, h: PathFunction, cfg: EstimatorConfig) -> GraphonEstimate:
    r = cfg.resolution
    t = (np.arange(r) + 0.5) / r
    logs = np.log1p(-_sampled_distances(g, h, t, cfg))
    inner = np.mean(logs[np.newaxis, :] / W(t[:, np.newaxis], t[np.newaxis, :]), axis=1)
    estimate = 1.0 - float(np.mean(np.exp(inner)))
    return GraphonEstimate(estimate=estimate, mode=EstimatorMode.GRID, samples=r * r)


def _monte_carlo_estimate(W: Graphon, g: PathFunction, h: PathFunction, cfg: EstimatorConfig) -> GraphonEstimate:
    m = cfg.samples_y

    def outer(block: range) -> Tuple[np.ndarray, np.ndarray]:
        values = np.empty(len(block))
        biases = np.zeros(len(block))
        for k, index in enumerate(block):
            rng = stream(cfg.seed, index, LANE_GRAPHON)
            x = rng.random()
            y = rng.random(m)
            terms = np.log1p(-_sampled_distances(g, h, y, cfg)) / W(x, y)
            total = terms.sum()
            values[k] = np.exp(total / m)
            if m > 1:
                leave_one_out = np.exp((total - terms) / (m - 1))
                biases[k] = (m - 1) * (leave_one_out.mean() - values[k])
        return values, biases

    results = parallel_map(outer, block_ranges(cfg.samples_x))
    values = np.concatenate([v for v, _ in results])
    biases = np.concatenate([b for _, b in results])

    estimate = 1.0 - float(values.mean())
    std_error = float(values.std(ddof=1) / np.sqrt(len(values)))
    return GraphonEstimate(
        estimate=estimate,
        std_error=std_error,
        bias=-float(biases.mean()),
        mode=EstimatorMode.MONTE_CARLO,
        samples=cfg.samples_x * m,
    )


def graphon_distance(
    W: Graphon,
    g: PathFunction,
    h: PathFunction,
    cfg: Optional[EstimatorConfig] = None,
) -> GraphonEstimate:
    """Estimate d_{G,W}(g, h) in [0, 1]."""
    cfg = cfg or EstimatorConfig()
    if cfg.mode == EstimatorMode.GRID:
        result = _grid_estimate(W, g, h, cfg)
    else:
        result = _monte_carlo_estimate(W, g, h, cfg)
    logger.debug("graphon_distance", mode=cfg.mode.value, estimate=result.estimate,
                 std_error=result.std_error, samples=result.samples)
    return result


def step_cellwise_distance(W: Graphon, cell_distances: Sequence[float]) -> float:
    """
    Closed form on a step graphon when d(g, h) is constant on each cell:
    1 - (1/n) sum_k exp((1/n) sum_l log(1 - d_l) / W_kl).
    """
    if W.cells is None:
        raise InvalidParameterError("closed form requires a step or constant graphon")
    cells = np.asarray(W.cells, dtype=float)
    d = np.asarray(cell_distances, dtype=float)
    if d.shape != (cells.shape[0],):
        raise InvalidParameterError(f"{cells.shape[0]} cell distances required", {"given": len(d)})
    inner = np.mean(np.log1p(-d)[np.newaxis, :] / cells, axis=1)
    return 1.0 - float(np.mean(np.exp(inner)))


def row_normalized_weights(g: WeightedDigraph) -> WeightDiagnostics:
    """
    Conditional form p_{j|i} = p_ji / sum_j p_ji with marginals p_i
    proportional to the column sums. Diagnostics only.
    """
    weights = np.zeros((g.n, g.n), dtype=float)
    for j in range(g.n):
        for i in range(g.n):
            weights[j, i] = g.weight(j, i) or 0.0
    column = weights.sum(axis=0)
    conditional = np.divide(weights, column, out=np.zeros_like(weights), where=column > 0)
    total = column.sum()
    marginals = column / total if total > 0 else np.zeros(g.n)
    return WeightDiagnostics(conditional=conditional.tolist(), marginals=marginals.tolist())
