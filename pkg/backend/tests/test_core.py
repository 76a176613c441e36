"""Tests for counter streams, the parallel map, exceptions and logging."""

import io
import json

import numpy as np
import pytest

from app.core.exceptions import EditRejectedError, ExportError, InvalidParameterError
from app.core.logging import get_logger, setup_logging
from app.core.parallel import block_ranges, parallel_map
from app.core.rng import LANE_GRAPHON, LANE_PAIRS, stream


def test_stream_is_reproducible():
    a = stream(7, 3).random(5)
    b = stream(7, 3).random(5)
    np.testing.assert_array_equal(a, b)


def test_streams_differ_by_index_lane_and_seed():
    base = stream(7, 3, LANE_PAIRS).random(4)
    assert not np.array_equal(base, stream(7, 4, LANE_PAIRS).random(4))
    assert not np.array_equal(base, stream(7, 3, LANE_GRAPHON).random(4))
    assert not np.array_equal(base, stream(8, 3, LANE_PAIRS).random(4))


@pytest.mark.parametrize("seed,index", [(-1, 0), (0, -1)])
def test_stream_rejects_negative(seed, index):
    with pytest.raises(InvalidParameterError):
        stream(seed, index)


def test_block_ranges():
    assert block_ranges(5, block=2) == [range(0, 2), range(2, 4), range(4, 5)]
    assert block_ranges(0, block=2) == []


def test_parallel_map_preserves_order():
    items = list(range(100))
    assert parallel_map(lambda v: v * v, items, threads=8) == [v * v for v in items]
    assert parallel_map(lambda v: v, [], threads=8) == []


def test_exception_to_dict():
    err = EditRejectedError("edge (0, 1) already present", (0, 1))
    assert err.to_dict() == {
        "error_code": "EDIT_REJECTED",
        "message": "edge (0, 1) already present",
        "details": {"edge": [0, 1]},
    }
    assert ExportError("cannot write", path="/x").details == {"path": "/x"}
    assert isinstance(InvalidParameterError("bad"), ValueError)


def test_logging_writes_json_events():
    buffer = io.StringIO()
    setup_logging("INFO", stream=buffer)
    get_logger("test").info("pairs_sampled", count=3)
    event = json.loads(buffer.getvalue().strip().splitlines()[-1])
    assert event["event"] == "pairs_sampled"
    assert event["count"] == 3
