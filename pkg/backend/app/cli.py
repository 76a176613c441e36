"""
graphmetric Command Line

Subcommands: generate, dist, verify, union, product, graphon, experiment,
reproduce-figure. Results go to stdout (or --out); logs go to stderr.

Exit codes: 0 success, 1 failed verification, 2 usage or parameter error.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import GraphFormatError, GraphMetricException, InvalidParameterError
from app.core.logging import get_logger, setup_logging
from app.models.experiment import DistributionKind, ExportFormat, SampleSource, SampleSpec
from app.models.graph import GraphKind, Orientation, WeightedDigraph
from app.models.graphon import EstimatorConfig, EstimatorMode
from app.models.joint import JointMetricSpace
from app.models.metric import ElementalMetric
from app.models.verification import Law
from app.services.digraph import generate, transitive_closure
from app.services.experiment import run_experiment
from app.services.export import render
from app.services.figures import RECIPES, reproduce_figure
from app.services.graph_io import dumps_graph, read_graph, read_points
from app.services.graphon import graphon_distance, path_from_spec, step_graphon
from app.services.joint_metric import (
    joint_distances,
    make_space,
    product_law_report,
    union_decomposition,
)
from app.services.metric_core import discrete_metric, half_absolute_metric
from app.services.verification import run_law

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2

_METRICS: Dict[str, Callable[[], ElementalMetric]] = {
    "half-absolute": half_absolute_metric,
    "discrete": discrete_metric,
}


# =============================================================================
# Helpers
# =============================================================================

def _emit(args: argparse.Namespace, text: str) -> None:
    """Write to --out when given, otherwise stdout."""
    if args.out:
        path = Path(args.out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _json(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _space(graph: WeightedDigraph, metric: str) -> JointMetricSpace:
    return make_space(graph, [_METRICS[metric]() for _ in range(graph.n)])


def _point_pairs(path: str, n: int) -> List[np.ndarray]:
    """Consecutive rows (0, 1), (2, 3), ... of a points file."""
    points = read_points(path)
    if points.size and points.shape[1] != n:
        raise GraphFormatError(f"points have {points.shape[1]} columns, graph has {n} vertices", path=path)
    if len(points) % 2:
        raise GraphFormatError("points file must hold an even number of rows", path=path)
    return [points[0::2], points[1::2]]


def _first_pair(path: str, n: int) -> List[np.ndarray]:
    xs, ys = _point_pairs(path, n)
    if not len(xs):
        raise GraphFormatError("points file is empty", path=path)
    return [xs[0], ys[0]]


def _read_json(path: str) -> Dict[str, Any]:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise GraphFormatError(f"cannot read {path}: {e}", path=path) from e


# =============================================================================
# Subcommands
# =============================================================================

def cmd_generate(args: argparse.Namespace) -> int:
    graph = generate(
        GraphKind(args.kind),
        args.n,
        weight=args.weight,
        rows=args.rows,
        cols=args.cols,
        k=args.k,
        beta=args.beta,
        m=args.m,
        seed=args.seed,
        orientation=Orientation(args.orientation),
    )
    if args.closure:
        graph = transitive_closure(graph)
    _emit(args, dumps_graph(graph))
    return EXIT_OK


def cmd_dist(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    xs, ys = _point_pairs(args.points, graph.n)
    distances = joint_distances(_space(graph, args.metric), xs, ys, method=args.method)
    if args.format == "json":
        _emit(args, _json({"distances": [float(d) for d in distances]}))
    else:
        _emit(args, "".join(f"{float(d)!r}\n" for d in distances))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    laws = list(Law) if args.law == "all" else [Law(args.law)]
    reports = [run_law(law, args.trials, args.seed) for law in laws]

    if args.format == "json":
        payload = [r.model_dump(mode="json") for r in reports]
        _emit(args, _json(payload[0] if len(payload) == 1 else payload))
    else:
        lines = []
        for r in reports:
            status = "PASS" if r.passed else "FAIL"
            lines.append(f"{r.law.value}: {status} trials={r.trials} seed={r.seed} "
                         f"checks={r.checks} max_violation={r.max_violation:.3e}")
            lines.extend(f"  {failure}" for failure in r.failures)
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def cmd_union(args: argparse.Namespace) -> int:
    s1 = _space(read_graph(args.graph1), args.metric)
    s2 = _space(read_graph(args.graph2), args.metric)
    x, y = _first_pair(args.points, s1.n + s2.n)
    result = union_decomposition(s1, s2, x, y)
    _emit(args, _json({**result.model_dump(), "gap": result.gap}))
    return EXIT_OK


def cmd_product(args: argparse.Namespace) -> int:
    s1 = _space(read_graph(args.graph1), args.metric)
    s2 = _space(read_graph(args.graph2), args.metric)
    x, y = _first_pair(args.points, s1.n * s2.n)
    _emit(args, _json(product_law_report(s1, s2, x, y).model_dump()))
    return EXIT_OK


def cmd_graphon(args: argparse.Namespace) -> int:
    W = step_graphon(read_graph(args.graph), floor=args.floor)
    g = path_from_spec(_read_json(args.g))
    h = path_from_spec(_read_json(args.h))
    overrides = {
        key: value
        for key, value in (
            ("samples_x", args.samples_x),
            ("samples_y", args.samples_y),
            ("resolution", args.resolution),
        )
        if value is not None
    }
    cfg = EstimatorConfig(mode=EstimatorMode(args.mode), seed=args.seed, **overrides)
    _emit(args, _json(graphon_distance(W, g, h, cfg).model_dump(mode="json")))
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    spec = SampleSpec(
        source=SampleSource(args.source),
        pair_count=args.pairs or settings.default_pairs,
        seed=args.seed,
        exhaustive=args.exhaustive,
    )
    summary = run_experiment(read_graph(args.graph), spec, DistributionKind(args.kind), args.bins,
                             label=Path(args.graph).stem)
    if args.out:
        suffix = Path(args.out).suffix.lstrip(".").lower()
        fmt = ExportFormat(suffix) if suffix in {f.value for f in ExportFormat} else ExportFormat.CSV
    else:
        fmt = ExportFormat.JSON if args.format == "json" else ExportFormat.CSV
    _emit(args, render(summary, fmt))
    return EXIT_OK


def cmd_reproduce_figure(args: argparse.Namespace) -> int:
    written = reproduce_figure(args.id, args.out or "figures", pairs=args.pairs, bins=args.bins, seed=args.seed)
    if args.format == "json":
        sys.stdout.write(_json([str(p) for p in written]))
    else:
        sys.stdout.write("".join(f"{p}\n" for p in written))
    return EXIT_OK


# =============================================================================
# Parser
# =============================================================================

def _add_globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    default: Any = argparse.SUPPRESS
    parser.add_argument("--seed", type=int, default=default if suppress else 0,
                        help="seed for every random draw (default 0)")
    parser.add_argument("--out", default=default if suppress else None,
                        help="output file (output directory for reproduce-figure)")
    parser.add_argument("--format", choices=["text", "json"], default=default if suppress else "text",
                        help="result and error format")
    parser.add_argument("--log-level", default=default if suppress else settings.log_level)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphmetric",
        description="Graph-parameterized joint metrics on products of normalized metric spaces.",
    )
    _add_globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable[[argparse.Namespace], int], summary: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=summary, description=summary)
        _add_globals(p, suppress=True)
        p.set_defaults(handler=handler)
        return p

    p = command("generate", cmd_generate, "write a synthetic graph as JSON")
    p.add_argument("--kind", required=True, choices=[k.value for k in GraphKind])
    p.add_argument("--n", type=int)
    p.add_argument("--rows", type=int)
    p.add_argument("--cols", type=int)
    p.add_argument("--k", type=int, help="Watts-Strogatz degree (even)")
    p.add_argument("--beta", type=float, help="Watts-Strogatz rewiring probability")
    p.add_argument("--m", type=int, help="random_sparse edge count")
    p.add_argument("--weight", type=float, default=1.0)
    p.add_argument("--orientation", choices=[o.value for o in Orientation], default=Orientation.UNDIRECTED.value)
    p.add_argument("--closure", action="store_true", help="take the transitive closure")

    metric_help = "elemental metric for every factor"

    p = command("dist", cmd_dist, "joint distance of consecutive point rows")
    p.add_argument("--graph", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--metric", choices=sorted(_METRICS), default="half-absolute", help=metric_help)
    p.add_argument("--method", choices=["log", "direct"], default="log")

    p = command("verify", cmd_verify, "run a law suite; exit 0 iff every assertion holds")
    p.add_argument("--law", required=True, choices=[law.value for law in Law] + ["all"])
    p.add_argument("--trials", type=int, default=100)

    p = command("union", cmd_union, "disjoint-union decomposition of the first point pair")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--metric", choices=sorted(_METRICS), default="half-absolute", help=metric_help)

    p = command("product", cmd_product, "Cartesian-product diagnostics of the first point pair")
    p.add_argument("--graph1", required=True)
    p.add_argument("--graph2", required=True)
    p.add_argument("--points", required=True)
    p.add_argument("--metric", choices=sorted(_METRICS), default="discrete", help=metric_help)

    p = command("graphon", cmd_graphon, "graphon-limit distance on the step graphon of a graph")
    p.add_argument("--graph", required=True)
    p.add_argument("--g", required=True, help="path function JSON")
    p.add_argument("--h", required=True, help="path function JSON")
    p.add_argument("--mode", choices=[m.value for m in EstimatorMode], default=EstimatorMode.GRID.value)
    p.add_argument("--samples-x", type=int)
    p.add_argument("--samples-y", type=int)
    p.add_argument("--resolution", type=int)
    p.add_argument("--floor", type=float, default=None)

    p = command("experiment", cmd_experiment, "distance or log-distance-ratio distribution")
    p.add_argument("--graph", required=True)
    p.add_argument("--kind", choices=[k.value for k in DistributionKind], default=DistributionKind.DISTANCE.value)
    p.add_argument("--source", choices=[s.value for s in SampleSource], default=SampleSource.CUBE_VOLUME.value)
    p.add_argument("--pairs", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--exhaustive", action=argparse.BooleanOptionalAction, default=None)

    figure_help = "; ".join(f"{r.id}: {r.description}" for r in RECIPES.values())
    p = command("reproduce-figure", cmd_reproduce_figure, "run a figure recipe and write csv + svg per panel")
    p.add_argument("--id", required=True, choices=sorted(RECIPES), help=figure_help)
    p.add_argument("--pairs", type=int)
    p.add_argument("--bins", type=int)

    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    """Parse argv, dispatch, and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK

    setup_logging(args.log_level, stream=sys.stderr)
    try:
        return args.handler(args)
    except ValidationError as e:
        return run_failed(args, InvalidParameterError(
            "invalid parameters", {"errors": e.errors(include_url=False, include_context=False)}
        ))
    except GraphMetricException as e:
        return run_failed(args, e)


def run_failed(args: argparse.Namespace, e: GraphMetricException) -> int:
    """Report a library error on stderr; JSON with --format json."""
    logger.error("command_failed", command=args.command, error_code=e.error_code, message=e.message)
    if args.format == "json":
        sys.stderr.write(json.dumps(e.to_dict(), default=str) + "\n")
    else:
        sys.stderr.write(f"error: {e.message}\n")
    return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
