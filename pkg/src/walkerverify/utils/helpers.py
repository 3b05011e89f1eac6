"""
Helper utilities shared across walkerverify.

Batch mapping over point chunks, scale-relative residuals and grid parsing.
"""

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, TypeVar

import numpy as np

T = TypeVar("T")


def chunk_ranges(n: int, chunks: int) -> list[tuple[int, int]]:
    """
    Split ``range(n)`` into at most ``chunks`` contiguous ranges.

    Args:
        n: Number of items
        chunks: Requested number of ranges

    Returns:
        List of (start, stop) pairs covering ``range(n)`` in order
    """
    chunks = max(1, min(chunks, n))
    bounds = np.linspace(0, n, chunks + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def map_chunks(
    func: Callable[[int, int], T],
    n: int,
    threads: int = 1,
) -> list[T]:
    """
    Apply ``func(start, stop)`` to contiguous index ranges.

    Results are returned in index order whatever the thread count, so that
    aggregations are identical between serial and parallel runs.

    Args:
        func: Callable evaluated on each index range
        n: Total number of indices
        threads: Maximum worker threads

    Returns:
        Results ordered by range start
    """
    ranges = chunk_ranges(n, threads)
    if threads <= 1 or len(ranges) <= 1:
        return [func(a, b) for a, b in ranges]

    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(func, a, b) for a, b in ranges]
        return [f.result() for f in futures]


def relative_residual(residual: np.ndarray, *terms: np.ndarray) -> np.ndarray:
    """
    Scale a residual by ``1 + max |term|`` over trailing axes.

    Args:
        residual: Array with a leading batch axis
        terms: Arrays with the same leading batch axis

    Returns:
        Per-batch-element scale-relative residual
    """
    n = residual.shape[0]
    res = np.abs(residual).reshape(n, -1).max(axis=1)
    scale = np.ones(n)
    for term in terms:
        scale = np.maximum(scale, 1.0 + np.abs(term).reshape(n, -1).max(axis=1))
    return res / scale


def parse_grid(spec: str) -> dict[str, tuple[float, float, int]]:
    """
    Parse a grid specification of the form ``"v=-1:1:5,x=0.5:1.5:3"``.

    Args:
        spec: Comma separated ``name=lo:hi:count`` items

    Returns:
        Mapping from coordinate name to (lo, hi, count)
    """
    grid: dict[str, tuple[float, float, int]] = {}
    for item in filter(None, (part.strip() for part in spec.split(","))):
        name, _, rng = item.partition("=")
        pieces = rng.split(":")
        if not name or len(pieces) != 3:
            raise ValueError(f"Invalid grid item '{item}', expected name=lo:hi:count")
        lo, hi, count = float(pieces[0]), float(pieces[1]), int(pieces[2])
        if count < 1:
            raise ValueError(f"Grid count for '{name}' must be positive")
        grid[name.strip()] = (lo, hi, count)
    return grid


def as_list(values: Sequence[float]) -> list[float]:
    """Convert numpy scalars to plain floats for serialization."""
    return [float(v) for v in values]
