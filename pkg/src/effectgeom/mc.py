"""Deterministic chunked execution for Monte Carlo loops.

The sample index space [0, n) is cut into fixed-size chunks.  Chunk i gets
its own generator derived from (seed, i), so results depend only on the
spec, never on scheduling: workers may process chunks in any order and
aggregation is a sum of per-chunk integer counts.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Sequence

import numpy as np

#: Samples per chunk; fixed so that (seed, chunk index) -> stream is stable.
CHUNK_SIZE = 65536

#: Environment variable overriding the default worker count.
WORKERS_ENV_VAR = "EFFECTGEOM_WORKERS"


def chunk_rng(seed: int, index: int) -> np.random.Generator:
    """Generator for chunk ``index`` of a run seeded with ``seed``."""
    return np.random.default_rng([int(seed), int(index)])


def chunk_layout(n: int, chunk_size: int = CHUNK_SIZE) -> list[tuple[int, int]]:
    """(index, size) pairs covering [0, n)."""
    out = []
    index = 0
    remaining = int(n)
    while remaining > 0:
        size = min(chunk_size, remaining)
        out.append((index, size))
        index += 1
        remaining -= size
    return out


def resolve_workers(workers: int | None) -> int:
    """Explicit argument, else the environment override, else 1."""
    if workers is not None:
        if workers < 1:
            raise ValueError(f"workers must be >= 1, got {workers}")
        return int(workers)
    env = os.environ.get(WORKERS_ENV_VAR)
    if env:
        return max(1, int(env))
    return 1


def run_chunked(
    task: Callable[..., np.ndarray],
    args: tuple,
    n: int,
    workers: int | None = None,
) -> np.ndarray:
    """Sum ``task(*args, index, size)`` over all chunks covering n samples.

    ``task`` must be a module-level function returning an integer ndarray of
    fixed shape (so it can be shipped to a process pool); the sum is
    order-independent, so any worker count yields identical totals.
    """
    layout = chunk_layout(n)
    workers = resolve_workers(workers)
    if workers == 1 or len(layout) == 1:
        parts = [task(*args, index, size) for index, size in layout]
    else:
        with ProcessPoolExecutor(max_workers=min(workers, len(layout))) as pool:
            futures = [pool.submit(task, *args, index, size) for index, size in layout]
            parts = [f.result() for f in futures]
    return np.sum(np.stack(parts), axis=0)
