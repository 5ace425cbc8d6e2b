"""Deterministic seeding and an order-preserving parallel trial runner.

Trial ``i`` of a run with master seed ``s`` draws from
``Generator(PCG64(trial_seed(s, i)))``, where ``trial_seed`` is the
SplitMix64 finalizer applied to ``s + (i + 1) * 0x9E3779B97F4A7C15 (mod 2^64)``.
Results never depend on how trials are spread over workers.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable
from concurrent.futures import ProcessPoolExecutor

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z: int) -> int:
    z &= _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def trial_seed(master: int, index: int) -> int:
    if master < 0 or index < 0:
        raise ValueError("seed and index must be nonnegative")
    return splitmix64((master + (index + 1) * _GOLDEN) & _MASK)


def trial_rng(master: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trial_seed(master, index)))


def chunk_sizes(total: int, chunk: int) -> list[int]:
    """Split ``total`` into fixed-size chunks (last one shorter); independent of workers."""
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def parallel_map(fn: Callable, items: Iterable, workers: int = 1) -> list:
    """``[fn(x) for x in items]`` over a process pool, results in input order."""
    items = list(items)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    per = max(1, len(items) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items, chunksize=per))
