"""
Counter-Based Random Streams

Every random draw in the library comes from a Philox generator keyed by the
user seed, with the counter positioned by (lane, index). Streams for different
indices never overlap, so results do not depend on evaluation order or on the
number of worker threads.
"""

import numpy as np
from numpy.random import Generator, Philox

from app.core.exceptions import InvalidParameterError

_KEY_MASK = (1 << 128) - 1

# Lanes keep independent consumers of the same seed apart.
LANE_PAIRS = 0
LANE_REWIRE = 1
LANE_GRAPHON = 2
LANE_GRAPHS = 3
LANE_SPARSE = 4


def stream(seed: int, index: int, lane: int = LANE_PAIRS) -> Generator:
    """Return the generator for counter position (lane, index) under seed."""
    if seed < 0:
        raise InvalidParameterError("seed must be non-negative", {"seed": seed})
    if index < 0:
        raise InvalidParameterError("stream index must be non-negative", {"index": index})
    counter = np.array([0, index, lane, 0], dtype=np.uint64)
    return Generator(Philox(key=seed & _KEY_MASK, counter=counter))
