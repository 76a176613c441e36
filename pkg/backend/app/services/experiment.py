"""
Experiment Service

Seeded sampling of product-point pairs, distance and log-distance-ratio
distributions, and their histogram summaries.
"""

from typing import List, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import InvalidParameterError, PreconditionError
from app.core.logging import get_logger
from app.core.parallel import block_ranges, parallel_map
from app.core.rng import LANE_PAIRS, stream
from app.models.experiment import (
    DistributionKind,
    DistributionSummary,
    ReferenceDistributions,
    SampleSource,
    SampleSpec,
)
from app.models.graph import WeightedDigraph
from app.models.joint import SANDWICH_TOL, JointMetricSpace
from app.services.joint_metric import joint_distances, make_space, reference_graphs
from app.services.metric_core import discrete_metric, half_absolute_metric

logger = get_logger(__name__)

# Log-ratios in (-tol, 0) are rounding residue of d == d_null.
RATIO_CLIP_TOL = 1e-12


def experiment_space(graph: WeightedDigraph, source: SampleSource) -> JointMetricSpace:
    """Half-absolute factors for the cube volume, discrete ones for its vertices."""
    factory = discrete_metric if SampleSource(source) == SampleSource.CUBE_VERTICES else half_absolute_metric
    return make_space(graph, [factory() for _ in range(graph.n)])


# =============================================================================
# Sampling
# =============================================================================

def _draw_block(n: int, spec: SampleSpec, block_index: int, size: int) -> Tuple[np.ndarray, np.ndarray]:
    rng = stream(spec.seed, block_index, LANE_PAIRS)
    if spec.source == SampleSource.CUBE_VERTICES:
        draws = rng.integers(0, 2, size=(size, 2, n)).astype(float)
    else:
        draws = rng.random((size, 2, n))
    return draws[:, 0, :], draws[:, 1, :]


def sample_pairs(n: int, spec: SampleSpec) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw spec.pair_count independent (g, h) pairs in [0,1]^n or {0,1}^n.

    Pair index k lives in block k // pair_block, and each block has its own
    counter stream, so the draws do not depend on the thread count.
    """
    blocks = block_ranges(spec.pair_count)
    drawn = parallel_map(
        lambda b: _draw_block(n, spec, b.start // settings.pair_block, len(b)),
        blocks,
    )
    xs = np.concatenate([x for x, _ in drawn])
    ys = np.concatenate([y for _, y in drawn])
    return xs, ys


def _use_exhaustive(s: JointMetricSpace, spec: SampleSpec) -> bool:
    within_limit = 4 ** s.n <= settings.exhaustive_limit
    if spec.exhaustive is None:
        return spec.source == SampleSource.CUBE_VERTICES and within_limit
    if spec.exhaustive:
        if not within_limit:
            raise InvalidParameterError(
                "space too large for exhaustive enumeration",
                {"n": s.n, "pairs": 4 ** s.n, "limit": settings.exhaustive_limit},
            )
        if not all(metric.is_binary for metric in s.metrics):
            raise PreconditionError("exhaustive enumeration requires {0,1}-valued metrics")
    return spec.exhaustive


def enumerate_differences(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    All 2^n difference vectors as (zeros, v) pairs.

    Under {0,1}-valued metrics a pair's distance depends only on where the
    points differ, so each vector stands for 2^n of the 4^n binary pairs.
    """
    codes = np.arange(2 ** n, dtype=np.int64)
    bits = ((codes[:, np.newaxis] >> np.arange(n)) & 1).astype(float)
    return np.zeros_like(bits), bits


# =============================================================================
# Summaries
# =============================================================================

def summarize(
    values: np.ndarray,
    kind: DistributionKind,
    bins: int,
    weights: Optional[np.ndarray] = None,
    **provenance: object,
) -> DistributionSummary:
    """Equal-width histogram plus weighted moments."""
    if bins < 1:
        raise InvalidParameterError("bins must be >= 1", {"bins": bins})
    values = np.asarray(values, dtype=float)
    w = np.ones(len(values), dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)

    lower = 0.0
    if kind == DistributionKind.DISTANCE:
        upper = 1.0
    else:
        # Sandwich violations leave log-ratios below zero; keep them in range.
        if len(values):
            lower = min(0.0, float(values.min()))
        upper = float(values.max()) if len(values) and values.max() > 0 else 1.0
    counts, edges = np.histogram(values, bins=bins, range=(lower, upper), weights=w)
    counts = np.rint(counts).astype(np.int64)

    total = int(w.sum())
    if total:
        mean = float(np.average(values, weights=w))
        variance = float(np.average((values - mean) ** 2, weights=w))
        lo, hi = float(values.min()), float(values.max())
    else:
        mean = variance = lo = hi = 0.0

    return DistributionSummary(
        kind=kind,
        bin_edges=[float(e) for e in edges],
        counts=[int(c) for c in counts],
        mean=min(max(mean, lo), hi),
        variance=variance,
        min=lo,
        max=hi,
        count=total,
        **provenance,
    )


def _distances_with_references(
    s: JointMetricSpace, xs: np.ndarray, ys: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    null, full = reference_graphs(s.graph)
    d = joint_distances(s, xs, ys)
    d_null = joint_distances(s.with_graph(null), xs, ys)
    d_full = joint_distances(s.with_graph(full), xs, ys)
    return d, d_null, d_full


def _sandwich_violations(d: np.ndarray, d_null: np.ndarray, d_full: np.ndarray, weights: np.ndarray) -> int:
    bad = (d_null > d + SANDWICH_TOL) | (d > d_full + SANDWICH_TOL)
    return int(weights[bad].sum())


def distribution_from_pairs(
    s: JointMetricSpace,
    xs: np.ndarray,
    ys: np.ndarray,
    kind: DistributionKind = DistributionKind.DISTANCE,
    bins: Optional[int] = None,
    weights: Optional[np.ndarray] = None,
    **provenance: object,
) -> DistributionSummary:
    """Summarize d or log(d / d_null) over explicit pairs."""
    bins = bins or settings.default_bins
    xs = np.atleast_2d(np.asarray(xs, dtype=float))
    ys = np.atleast_2d(np.asarray(ys, dtype=float))
    if xs.shape != ys.shape or xs.shape[1] != s.n:
        raise InvalidParameterError(
            f"sampled points must have {s.n} coordinates",
            {"x": list(xs.shape), "y": list(ys.shape)},
        )
    w = np.ones(len(xs), dtype=np.int64) if weights is None else np.asarray(weights, dtype=np.int64)

    d, d_null, d_full = _distances_with_references(s, xs, ys)
    violations = _sandwich_violations(d, d_null, d_full, w)
    if violations:
        logger.warning("sandwich_violated", pairs=violations)

    if kind == DistributionKind.DISTANCE:
        return summarize(d, kind, bins, w, sandwich_violations=violations, **provenance)

    kept = d_null > 0
    with np.errstate(divide="ignore", invalid="ignore"):
        ratios = np.log(d[kept] / d_null[kept])
    ratios = np.where((ratios < 0) & (ratios > -RATIO_CLIP_TOL), 0.0, ratios)
    excluded = int(w[~kept].sum())
    return summarize(
        ratios, kind, bins, w[kept],
        excluded=excluded, sandwich_violations=violations, **provenance,
    )


def _pairs(s: JointMetricSpace, spec: SampleSpec) -> Tuple[np.ndarray, np.ndarray, Optional[np.ndarray], bool]:
    """Exhaustive difference vectors with their weights, or seeded samples."""
    exhaustive = _use_exhaustive(s, spec)
    if exhaustive:
        xs, ys = enumerate_differences(s.n)
        return xs, ys, np.full(len(xs), 2 ** s.n, dtype=np.int64), True
    xs, ys = sample_pairs(s.n, spec)
    return xs, ys, None, False


def _run(
    s: JointMetricSpace,
    spec: SampleSpec,
    kind: DistributionKind,
    bins: Optional[int],
    label: str,
) -> DistributionSummary:
    xs, ys, weights, exhaustive = _pairs(s, spec)

    summary = distribution_from_pairs(
        s, xs, ys, kind, bins, weights,
        label=label, seed=spec.seed, source=spec.source, exhaustive=exhaustive,
    )
    logger.info(
        "distribution_sampled",
        kind=kind.value,
        n=s.n,
        pairs=summary.count + summary.excluded,
        exhaustive=exhaustive,
        seed=spec.seed,
        mean=summary.mean,
    )
    return summary


def distance_distribution(
    s: JointMetricSpace,
    spec: SampleSpec,
    bins: Optional[int] = None,
    label: str = "",
) -> DistributionSummary:
    """Histogram of joint distances over [0, 1]."""
    return _run(s, spec, DistributionKind.DISTANCE, bins, label)


def log_distance_ratio_distribution(
    s: JointMetricSpace,
    spec: SampleSpec,
    bins: Optional[int] = None,
    label: str = "",
) -> DistributionSummary:
    """Histogram of log(d / d_null); pairs with d_null = 0 are counted in ``excluded``."""
    return _run(s, spec, DistributionKind.LOG_RATIO, bins, label)


def reference_distance_distributions(
    s: JointMetricSpace,
    spec: SampleSpec,
    bins: Optional[int] = None,
    label: str = "",
) -> ReferenceDistributions:
    """Histograms of d, d_null and d_full over one shared set of pairs."""
    bins = bins or settings.default_bins
    xs, ys, weights, exhaustive = _pairs(s, spec)
    d, d_null, d_full = _distances_with_references(s, xs, ys)
    w = np.ones(len(xs), dtype=np.int64) if weights is None else weights
    violations = _sandwich_violations(d, d_null, d_full, w)
    if violations:
        logger.warning("sandwich_violated", pairs=violations)

    provenance = dict(seed=spec.seed, source=spec.source, exhaustive=exhaustive, sandwich_violations=violations)
    series = {
        name: summarize(values, DistributionKind.DISTANCE, bins, w, label=f"{label}/{name}", **provenance)
        for name, values in (("d", d), ("d_null", d_null), ("d_full", d_full))
    }
    logger.info("reference_distributions_sampled", n=s.n, pairs=int(w.sum()), exhaustive=exhaustive,
                seed=spec.seed, means={name: summary.mean for name, summary in series.items()})
    return ReferenceDistributions(**series)


def run_experiment(
    graph: WeightedDigraph,
    spec: SampleSpec,
    kind: DistributionKind = DistributionKind.DISTANCE,
    bins: Optional[int] = None,
    label: str = "",
) -> DistributionSummary:
    """Build the source's space over graph and run the requested distribution."""
    s = experiment_space(graph, spec.source)
    if DistributionKind(kind) == DistributionKind.LOG_RATIO:
        return log_distance_ratio_distribution(s, spec, bins, label)
    return distance_distribution(s, spec, bins, label)


def mass_at(summary: DistributionSummary, value: float) -> int:
    """Count in the bin holding value."""
    edges = summary.bin_edges
    index = int(np.searchsorted(edges, value, side="right")) - 1
    index = min(max(index, 0), len(summary.counts) - 1)
    return summary.counts[index]


def nonzero_bins(summary: DistributionSummary) -> List[Tuple[float, float, int]]:
    """(left, right, count) for every bin with positive count."""
    return [
        (summary.bin_edges[k], summary.bin_edges[k + 1], c)
        for k, c in enumerate(summary.counts)
        if c > 0
    ]
