"""Deterministic blocked summation with optional thread workers.

Terms are produced in fixed-size index blocks; each block is reduced by
numpy (pairwise, layout-fixed), and the block sums are combined with
math.fsum, which is exact and therefore independent of both block arrival
order and worker count.  Results are bit-identical for any `workers`.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

BLOCK = 4096
CHUNK = 1 << 16  # indices handed to one worker task at a time


def block_sums(values: np.ndarray) -> list:
    """Per-block numpy sums of a 1-d array, fixed BLOCK layout."""
    n = values.size
    out = []
    for lo in range(0, n, BLOCK):
        out.append(float(np.sum(values[lo : lo + BLOCK])))
    return out


def dsum(values: np.ndarray) -> float:
    """Deterministic compensated sum of a materialized 1-d array."""
    return math.fsum(block_sums(np.asarray(values, dtype=float)))


def sum_chunked(make_terms: Callable[[int, int], np.ndarray], n: int, workers: int = 1) -> float:
    """Sum make_terms(lo, hi) over [0, n) in CHUNK pieces, fsum at the end.

    make_terms must be pure; chunk boundaries are fixed, so any worker
    count yields bit-identical results.
    """
    if n <= 0:
        return 0.0
    spans = [(lo, min(lo + CHUNK, n)) for lo in range(0, n, CHUNK)]
    if workers <= 1 or len(spans) == 1:
        pieces = [block_sums(make_terms(lo, hi)) for lo, hi in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pieces = list(pool.map(lambda s: block_sums(make_terms(*s)), spans))
    return math.fsum(s for piece in pieces for s in piece)
