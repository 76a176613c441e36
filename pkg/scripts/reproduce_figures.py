#!/usr/bin/env python3
"""
Figure Reproduction Script

Runs every figure recipe and writes fig<ID>_<panel>.csv/.svg into one
directory. Pair counts and bins default to the library settings
(GRAPHMETRIC_DEFAULT_PAIRS, GRAPHMETRIC_DEFAULT_BINS).
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "backend"))

from app.core.config import settings  # noqa: E402
from app.core.logging import get_logger, setup_logging  # noqa: E402
from app.services.figures import RECIPES, reproduce_figure  # noqa: E402

logger = get_logger("reproduce_figures")


def main() -> int:
    parser = argparse.ArgumentParser(description="Reproduce every distance-distribution figure.")
    parser.add_argument("--out", default="figures")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pairs", type=int, default=None)
    parser.add_argument("--bins", type=int, default=None)
    parser.add_argument("--only", nargs="*", choices=sorted(RECIPES), help="subset of figure ids")
    args = parser.parse_args()

    setup_logging(settings.log_level)
    for figure_id in args.only or list(RECIPES):
        paths = reproduce_figure(figure_id, Path(args.out), pairs=args.pairs, bins=args.bins, seed=args.seed)
        logger.info("figure_written", figure=figure_id, files=[str(p) for p in paths])
    return 0


if __name__ == "__main__":
    sys.exit(main())
