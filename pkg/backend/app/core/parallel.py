"""
Order-Preserving Parallel Map

Thread-pool fan-out used for batched distance evaluation and sampling.
numpy releases the GIL inside the heavy kernels, so threads are enough.
"""

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, List, Optional, Sequence, TypeVar

from app.core.config import settings

T = TypeVar("T")
R = TypeVar("R")


def parallel_map(fn: Callable[[T], R], items: Sequence[T], threads: Optional[int] = None) -> List[R]:
    """Apply fn to every item, returning results in input order."""
    workers = threads if threads is not None else settings.resolved_threads
    workers = max(1, min(workers, len(items)))
    if workers == 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def block_ranges(total: int, block: Optional[int] = None) -> List[range]:
    """Split range(total) into fixed-size blocks independent of thread count."""
    size = block or settings.pair_block
    return [range(start, min(start + size, total)) for start in range(0, total, size)]
