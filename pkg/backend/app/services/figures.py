"""
Figure Recipes

Pinned experiment recipes for the published distance and
log-distance-ratio distributions. Each panel of a figure is one graph;
reproducing a figure writes a CSV and an SVG per panel.
"""

from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict

from app.core.config import settings
from app.core.exceptions import InvalidParameterError
from app.core.logging import get_logger
from app.models.experiment import DistributionKind, ExportFormat, SampleSource, SampleSpec
from app.models.graph import GraphKind, Orientation, WeightedDigraph
from app.services.digraph import generate, symmetrize
from app.services.experiment import experiment_space, reference_distance_distributions, run_experiment
from app.services.export import export, export_overlay

logger = get_logger(__name__)

GraphBuilder = Callable[[int], WeightedDigraph]


class FigureRecipe(BaseModel):
    """One figure: the graphs compared and how pairs are drawn."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    id: str
    kind: DistributionKind
    source: SampleSource
    exhaustive: Optional[bool] = None
    description: str
    panels: Tuple[Tuple[str, GraphBuilder], ...]
    # Panels plotting d, d_null and d_full of the graph together.
    reference_panels: Tuple[Tuple[str, GraphBuilder], ...] = ()


def _cycle3_plus_isolated(extra: List[Tuple[int, int]]) -> GraphBuilder:
    def build(seed: int) -> WeightedDigraph:
        edges = {(0, 1): 1.0, (1, 2): 1.0, (2, 0): 1.0}
        edges.update({e: 1.0 for e in extra})
        return WeightedDigraph(n=4, edges=edges)

    return build


def _ws(n: int, k: int, beta: float, orientation: Orientation) -> GraphBuilder:
    return lambda seed: generate(
        GraphKind.WATTS_STROGATZ, n, k=k, beta=beta, seed=seed, orientation=orientation
    )


RECIPES: Dict[str, FigureRecipe] = {
    recipe.id: recipe
    for recipe in [
        FigureRecipe(
            id="1A", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VOLUME,
            description="null graph on 4 vertices (mean of elemental distances)",
            panels=(("null4", lambda seed: generate(GraphKind.NULL, 4)),),
        ),
        FigureRecipe(
            id="1B", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VOLUME,
            description="out-star on 4 vertices: center 0 -> leaves 1, 2, 3",
            panels=(("star_out4", lambda seed: generate(GraphKind.STAR_OUT, 4)),),
        ),
        FigureRecipe(
            id="1C", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VOLUME,
            description="chain on 4 vertices oriented i -> i+1",
            panels=(("chain4", lambda seed: generate(GraphKind.CHAIN, 4)),),
        ),
        FigureRecipe(
            id="1D", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VOLUME,
            description="complete graph on 4 vertices, both directions",
            panels=(("complete4", lambda seed: generate(GraphKind.COMPLETE, 4)),),
        ),
        FigureRecipe(
            id="2", kind=DistributionKind.LOG_RATIO, source=SampleSource.CUBE_VOLUME,
            description=(
                "directed 3-cycle 0->1->2->0 plus vertex 3; then add 2->3; then add 3->0. "
                "Log-ratio panels A, C, E; distance panels B, D, F with d, d_null and d_full"
            ),
            panels=(
                ("A", _cycle3_plus_isolated([])),
                ("C", _cycle3_plus_isolated([(2, 3)])),
                ("E", _cycle3_plus_isolated([(2, 3), (3, 0)])),
            ),
            reference_panels=(
                ("B", _cycle3_plus_isolated([])),
                ("D", _cycle3_plus_isolated([(2, 3)])),
                ("F", _cycle3_plus_isolated([(2, 3), (3, 0)])),
            ),
        ),
        FigureRecipe(
            id="3", kind=DistributionKind.LOG_RATIO, source=SampleSource.CUBE_VOLUME,
            description="undirected path(3), triangle(3), cycle(4) and complete(4)",
            panels=(
                ("path3", lambda seed: symmetrize(generate(GraphKind.CHAIN, 3))),
                ("triangle3", lambda seed: symmetrize(generate(GraphKind.CYCLE, 3))),
                ("cycle4", lambda seed: symmetrize(generate(GraphKind.CYCLE, 4))),
                ("complete4", lambda seed: generate(GraphKind.COMPLETE, 4)),
            ),
        ),
        FigureRecipe(
            id="4A", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VERTICES, exhaustive=True,
            description="null graph on 8 vertices over {0,1}^8 (Hamming weights)",
            panels=(("null8", lambda seed: generate(GraphKind.NULL, 8)),),
        ),
        FigureRecipe(
            id="4B", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VERTICES, exhaustive=True,
            description="chain poset on 8 vertices: comparability digraph i -> j for i < j",
            panels=(("poset_chain8", lambda seed: generate(GraphKind.POSET_CHAIN, 8)),),
        ),
        FigureRecipe(
            id="4C", kind=DistributionKind.DISTANCE, source=SampleSource.CUBE_VERTICES, exhaustive=True,
            description="star poset on 8 vertices: center 0 -> leaves",
            panels=(("star_out8", lambda seed: generate(GraphKind.STAR_OUT, 8)),),
        ),
        FigureRecipe(
            id="5", kind=DistributionKind.LOG_RATIO, source=SampleSource.CUBE_VOLUME,
            description="60 vertices: random sparse (90 edges), buckyball, 6x10 grid",
            panels=(
                ("random_sparse60", lambda seed: generate(GraphKind.RANDOM_SPARSE, 60, m=90, seed=seed)),
                ("buckyball", lambda seed: generate(GraphKind.BUCKYBALL)),
                ("grid6x10", lambda seed: generate(GraphKind.GRID2D, rows=6, cols=10)),
            ),
        ),
        FigureRecipe(
            id="6", kind=DistributionKind.LOG_RATIO, source=SampleSource.CUBE_VOLUME,
            description="Watts-Strogatz n=64, k=10, beta in {0, 0.025}, edges kept as j -> i for j < i",
            panels=(
                ("ws_beta0", _ws(64, 10, 0.0, Orientation.UPPER)),
                ("ws_beta0.025", _ws(64, 10, 0.025, Orientation.UPPER)),
            ),
        ),
        FigureRecipe(
            id="7", kind=DistributionKind.LOG_RATIO, source=SampleSource.CUBE_VOLUME,
            description=(
                "Watts-Strogatz n=64, beta=0.2, undirected vs j -> i for j < i; "
                "degree 4 because the ring lattice needs an even degree"
            ),
            panels=(
                ("ws_full", _ws(64, 4, 0.2, Orientation.UNDIRECTED)),
                ("ws_upper", _ws(64, 4, 0.2, Orientation.UPPER)),
            ),
        ),
    ]
}


def get_recipe(figure_id: str) -> FigureRecipe:
    try:
        return RECIPES[figure_id.upper()]
    except KeyError as e:
        raise InvalidParameterError(
            f"unknown figure id: {figure_id}", {"known": sorted(RECIPES)}
        ) from e


def reproduce_figure(
    figure_id: str,
    out_dir: Union[str, Path],
    pairs: Optional[int] = None,
    bins: Optional[int] = None,
    seed: int = 0,
) -> List[Path]:
    """
    Run every panel of a recipe and write fig<ID>_<panel>.csv and .svg.

    Reference panels write one CSV per series (fig<ID>_<panel>_d.csv,
    _d_null.csv, _d_full.csv) and a single overlay SVG.
    """
    recipe = get_recipe(figure_id)
    out_dir = Path(out_dir)
    spec = SampleSpec(
        source=recipe.source,
        pair_count=pairs or settings.default_pairs,
        seed=seed,
        exhaustive=recipe.exhaustive,
    )

    written: List[Path] = []
    for label, build in recipe.panels:
        graph = build(seed)
        summary = run_experiment(graph, spec, recipe.kind, bins, label=f"{recipe.id}/{label}")
        stem = f"fig{recipe.id}_{label}"
        written.append(export(summary, ExportFormat.CSV, out_dir / f"{stem}.csv"))
        written.append(export(summary, ExportFormat.SVG, out_dir / f"{stem}.svg"))

    for label, build in recipe.reference_panels:
        s = experiment_space(build(seed), recipe.source)
        references = reference_distance_distributions(s, spec, bins, label=f"{recipe.id}/{label}")
        stem = f"fig{recipe.id}_{label}"
        for name, summary in references.series().items():
            written.append(export(summary, ExportFormat.CSV, out_dir / f"{stem}_{name}.csv"))
        overlay = export_overlay(references.series(), out_dir / f"{stem}.svg", title=f"{recipe.id}/{label}")
        written.append(overlay)

    panels = len(recipe.panels) + len(recipe.reference_panels)
    logger.info("figure_reproduced", figure=recipe.id, panels=panels, out_dir=str(out_dir))
    return written
