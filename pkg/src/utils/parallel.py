"""Process pool fan-out with a tqdm progress bar."""

from __future__ import annotations

import logging
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from typing import Any, TypeVar

from tqdm import tqdm

logger = logging.getLogger(__name__)

T = TypeVar("T")

THREADS_ENV = "DEFECTQ_THREADS"


def pool_size(requested: int | None = None) -> int:
    """Worker count: min of CPU count, ``DEFECTQ_THREADS`` and ``requested``."""
    n = os.cpu_count() or 1
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = min(n, max(1, int(env)))
        except ValueError:
            logger.warning("Ignoring non-integer %s=%r", THREADS_ENV, env)
    if requested is not None and requested > 0:
        n = min(n, requested)
    return max(1, n)


def run_parallel(
    fn: Callable[[Any], T],
    items: Sequence[Any],
    *,
    workers: int | None = None,
    desc: str | None = None,
    progress: bool = True,
) -> list[T]:
    """Map ``fn`` over ``items`` preserving order.

    With one worker the map runs in-process, which keeps tracebacks readable
    and avoids pickling; results are identical because every item carries its
    own seed.
    """
    n = pool_size(workers)
    if n == 1 or len(items) <= 1:
        return [fn(item) for item in tqdm(items, desc=desc, disable=not progress)]
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(tqdm(pool.map(fn, items), total=len(items), desc=desc, disable=not progress))
