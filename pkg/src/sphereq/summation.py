"""Deterministic reductions for pairwise kernel sums.

All double sums in this package reduce through :func:`block_sum`: the input is
split into fixed-size blocks, each block is summed by numpy's pairwise
reduction, and the per-block partials are merged with Neumaier compensation in
block order.  Worker threads may compute blocks concurrently, but the merge
order is fixed, so results are bit-identical to serial execution regardless of
``SPHERE_EQ_THREADS``.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

import numpy as np

BLOCK = 1 << 14


def worker_count() -> int:
    """Worker cap from ``SPHERE_EQ_THREADS`` (default: hardware parallelism)."""
    raw = os.environ.get("SPHERE_EQ_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        n = os.cpu_count() or 1
    return n


def neumaier_sum(values) -> float:
    """Sequentially sum ``values`` with Neumaier's compensated accumulation."""
    total = 0.0
    comp = 0.0
    for v in values:
        v = float(v)
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def block_sum(arr: np.ndarray) -> float:
    """Deterministic compensated sum of a float array in fixed index order."""
    flat = np.ascontiguousarray(arr, dtype=float).ravel()
    if flat.size <= BLOCK:
        return float(np.sum(flat))
    partials = [np.sum(flat[i : i + BLOCK]) for i in range(0, flat.size, BLOCK)]
    return neumaier_sum(partials)


def blocked_pair_reduce(n_rows: int, row_block_sum, block: int = 64) -> float:
    """Reduce a virtual ``n_rows``-row matrix to a scalar, deterministically.

    ``row_block_sum(i0, i1)`` must return the (compensated) sum of rows
    ``i0:i1``.  Blocks run on up to ``SPHERE_EQ_THREADS`` workers; partials are
    merged in ascending block order.
    """
    spans = [(i, min(i + block, n_rows)) for i in range(0, n_rows, block)]
    workers = min(worker_count(), len(spans))
    if workers <= 1:
        partials = [row_block_sum(i0, i1) for i0, i1 in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(lambda s: row_block_sum(*s), spans))
    return neumaier_sum(partials)
