"""
Distribution Export

Writes DistributionSummary records as CSV, JSON or a self-contained SVG
histogram rendered with matplotlib.
"""

import io
from pathlib import Path
from typing import List, Mapping, Sequence, Tuple, Union

# Non-interactive backend for headless runs (CLI, API, CI)
import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from app.core.exceptions import ExportError, InvalidParameterError  # noqa: E402
from app.core.logging import get_logger  # noqa: E402
from app.models.experiment import DistributionSummary, ExportFormat  # noqa: E402

logger = get_logger(__name__)

# 6.4 x 4 in at 100 dpi: a 640 x 400 canvas.
SVG_FIGSIZE = (6.4, 4.0)
SVG_DPI = 100
SVG_HASH_SALT = "graphmetric"
SERIES_COLORS = ("#6366f1", "#9ca3af", "#ef4444")


def _number(value: float) -> str:
    return repr(float(value))


def render_csv(summary: DistributionSummary) -> str:
    """Provenance header, moments header, then one row per bin."""
    lines: List[str] = [
        f"# kind={summary.kind.value} label={summary.label} source={summary.source.value} "
        f"seed={summary.seed} exhaustive={str(summary.exhaustive).lower()} "
        f"excluded={summary.excluded} sandwich_violations={summary.sandwich_violations}",
        f"# mean={_number(summary.mean)} variance={_number(summary.variance)} n={summary.count}",
        "bin_left,bin_right,count",
    ]
    for k, count in enumerate(summary.counts):
        lines.append(f"{_number(summary.bin_edges[k])},{_number(summary.bin_edges[k + 1])},{count}")
    return "\n".join(lines) + "\n"


def render_json(summary: DistributionSummary) -> str:
    return summary.model_dump_json(indent=2) + "\n"


def _plot_svg(title: str, edges: Sequence[float], series: Sequence[Tuple[str, Sequence[int]]], filled: bool) -> str:
    fig, ax = plt.subplots(figsize=SVG_FIGSIZE, dpi=SVG_DPI)
    try:
        left = np.asarray(edges[:-1], dtype=float)
        widths = np.diff(np.asarray(edges, dtype=float))
        for (name, counts), color in zip(series, SERIES_COLORS):
            heights = np.asarray(counts, dtype=float)
            if filled:
                for k in np.flatnonzero(heights):
                    bar = ax.bar(left[k], heights[k], width=widths[k], align="edge", color=color)
                    bar.patches[0].set_gid(f"bin_{k}")
            else:
                ax.stairs(heights, edges, label=name, color=color, linewidth=1.5, gid=f"series_{name}")
        ax.set_xlim(edges[0], edges[-1])
        ax.set_title(title, fontsize=10)
        ax.set_ylabel("count")
        if not filled:
            ax.legend(fontsize=8)
        fig.tight_layout()

        buf = io.StringIO()
        # Fixed salt and no date keep the SVG byte-stable across runs.
        with plt.rc_context({"svg.hashsalt": SVG_HASH_SALT}):
            fig.savefig(buf, format="svg", metadata={"Date": None})
        return buf.getvalue()
    finally:
        plt.close(fig)


def render_svg(summary: DistributionSummary) -> str:
    """Bar histogram of one summary."""
    title = f"{summary.label or summary.kind.value} (n={summary.count}, mean={summary.mean:.4f})"
    return _plot_svg(title, summary.bin_edges, [(summary.kind.value, summary.counts)], filled=True)


def render_overlay_svg(summaries: Mapping[str, DistributionSummary], title: str = "") -> str:
    """Step outlines of several summaries sharing one set of bin edges."""
    if not summaries:
        raise InvalidParameterError("nothing to plot")
    edges = next(iter(summaries.values())).bin_edges
    if any(s.bin_edges != edges for s in summaries.values()):
        raise InvalidParameterError("overlaid summaries must share bin edges")
    return _plot_svg(title, edges, [(name, s.counts) for name, s in summaries.items()], filled=False)


_RENDERERS = {
    ExportFormat.CSV: render_csv,
    ExportFormat.JSON: render_json,
    ExportFormat.SVG: render_svg,
}


def render(summary: DistributionSummary, fmt: Union[ExportFormat, str]) -> str:
    try:
        renderer = _RENDERERS[ExportFormat(fmt)]
    except ValueError as e:
        raise InvalidParameterError(f"unknown export format: {fmt}") from e
    return renderer(summary)


def _write(text: str, path: Union[str, Path]) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as e:
        raise ExportError(f"cannot write {path}: {e.strerror or e}", path=str(path)) from e
    return path


def export(summary: DistributionSummary, fmt: Union[ExportFormat, str], path: Union[str, Path]) -> Path:
    """Write summary to path in the given format."""
    path = _write(render(summary, fmt), path)
    logger.info("summary_exported", format=ExportFormat(fmt).value, path=str(path))
    return path


def export_overlay(
    summaries: Mapping[str, DistributionSummary], path: Union[str, Path], title: str = ""
) -> Path:
    """Write an overlay SVG of several summaries."""
    path = _write(render_overlay_svg(summaries, title), path)
    logger.info("overlay_exported", series=list(summaries), path=str(path))
    return path


def parse_csv_counts(text: str) -> List[int]:
    """Counts column of a CSV export."""
    rows = [line for line in text.splitlines() if line and not line.startswith("#")]
    return [int(row.rsplit(",", 1)[1]) for row in rows[1:]]
