"""
Seeded point sampling and probabilistic zero testing.

Each resampling attempt draws one uniform batch from a generator seeded by
``(seed, attempt)``; point i takes row i of it. A point therefore depends only
on ``(seed, index)`` and the batch is the same however many points are drawn
or however the evaluation is chunked.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from ..config import DEFAULT_SAMPLES, DEFAULT_SEED, DEFAULT_ZERO_TOL, DIVISION_GUARD
from ..errors import EvaluationDomainError
from ..utils.helpers import map_chunks
from ..utils.logging import get_logger
from .domain import DomainBox, Point
from .evaluate import BatchEvaluator, term_scale
from .expr import Expr

logger = get_logger(__name__)

DEFAULT_RETRY_CAP = 50

# Extra rejection test: receives the candidate batch, returns a mask of bad points.
RejectFn = Callable[[dict[str, np.ndarray]], np.ndarray]


def _draw(box: DomainBox, seed: int, attempt: int, rows: int) -> np.ndarray:
    """Rows ``0 .. rows - 1`` of the uniform batch of ``attempt``; row i is the candidate for point i."""
    rng = np.random.default_rng([seed, attempt])
    lows = np.array([lo for _, lo, _ in box.intervals])
    highs = np.array([hi for _, _, hi in box.intervals])
    return lows + (highs - lows) * rng.random((rows, len(lows)))


def constraint_violations(
    box: DomainBox,
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
    guard: float = DIVISION_GUARD,
) -> np.ndarray:
    """Mask of points violating a constraint of ``box`` (undefined counts as violating)."""
    size = len(next(iter(env.values()))) if env else 1
    bad = np.zeros(size, dtype=bool)
    if not box.constraints:
        return bad
    evaluator = BatchEvaluator(env, params, guard)
    for constraint in box.constraints:
        bad |= ~(evaluator(constraint.expr) > constraint.margin)
    return bad | evaluator.bad


def sample_points(
    box: DomainBox,
    n: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    reject: Optional[RejectFn] = None,
    retry_cap: int = DEFAULT_RETRY_CAP,
    guard: float = DIVISION_GUARD,
) -> dict[str, np.ndarray]:
    """
    Draw ``n`` points uniformly from ``box``.

    Points violating a constraint, or flagged by ``reject``, are redrawn from
    their row of the next attempt batch.

    Args:
        box: Sampling domain
        n: Number of points
        seed: Base seed
        params: Parameter values used by constraints
        reject: Optional extra rejection test
        retry_cap: Attempts per point before giving up
        guard: Division guard for constraint evaluation

    Returns:
        Variable name to array of ``n`` values

    Raises:
        EvaluationDomainError: A point could not be placed within ``retry_cap`` attempts
    """
    if n < 1:
        raise ValueError("Sample count must be at least 1")
    params = dict(params or {})
    names = box.names
    coords = np.empty((n, len(names)))
    pending = np.arange(n)
    for attempt in range(retry_cap):
        coords[pending] = _draw(box, seed, attempt, int(pending[-1]) + 1)[pending]
        candidate = {name: coords[pending, k] for k, name in enumerate(names)}
        bad = constraint_violations(box, candidate, params, guard)
        if reject is not None:
            bad = bad | reject(candidate)
        pending = pending[bad]
        if pending.size == 0:
            break
        logger.debug("Resampling %d points (attempt %d)", pending.size, attempt + 1)
    else:
        raise EvaluationDomainError(
            f"Could not sample {pending.size} points inside the domain after {retry_cap} attempts",
            error_code="sampling",
            details={"indices": pending[:10].tolist()},
        )
    return {name: coords[:, k].copy() for k, name in enumerate(names)}


def point_at(env: Mapping[str, np.ndarray], index: int, params: Optional[Mapping[str, float]] = None) -> Point:
    """Extract one point of a sampled batch."""
    return Point({k: float(v[index]) for k, v in env.items()}, dict(params or {}))


def batch_reject(exprs: Sequence[Expr], params: Mapping[str, float], guard: float = DIVISION_GUARD) -> RejectFn:
    """Rejection test flagging points where any of ``exprs`` is undefined."""

    def reject(env: dict[str, np.ndarray]) -> np.ndarray:
        evaluator = BatchEvaluator(env, params, guard)
        for e in exprs:
            evaluator(e)
        return evaluator.bad

    return reject


@dataclass
class ZeroTestResult:
    """Outcome of a sampled zero test."""

    passed: bool
    """True iff every sampled residual is within tolerance"""

    max_residual: float
    """Largest scale-relative residual"""

    samples: int
    """Number of sampled points"""

    witness: Optional[Point] = None
    """Worst point when the test fails"""

    witness_residual: Optional[float] = None
    """Absolute residual at the witness"""

    def __bool__(self) -> bool:
        return self.passed


def is_zero_sampled(
    e: Expr,
    box: DomainBox,
    n: int = DEFAULT_SAMPLES,
    tol: float = DEFAULT_ZERO_TOL,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    threads: int = 1,
    retry_cap: int = DEFAULT_RETRY_CAP,
    guard: float = DIVISION_GUARD,
) -> ZeroTestResult:
    """
    Test whether ``e`` vanishes identically on ``box``.

    The residual at a point is ``|e| / (1 + max |subterm|)`` over every node of
    ``e``, so cancellation inside a product or a function argument is measured
    against the size of the cancelling terms. Points where ``e`` is undefined are
    resampled.

    Args:
        e: Expression expected to vanish
        box: Sampling domain
        n: Number of points
        tol: Tolerance on the scale-relative residual
        seed: Base seed
        params: Parameter values
        threads: Worker threads for evaluation
        retry_cap: Resampling attempts per point
        guard: Division guard

    Returns:
        ZeroTestResult with the worst point as witness when the test fails
    """
    params = dict(params or {})
    env = sample_points(box, n, seed, params, batch_reject([e], params, guard), retry_cap, guard)

    def chunk(start: int, stop: int) -> tuple[np.ndarray, np.ndarray]:
        evaluator = BatchEvaluator({k: v[start:stop] for k, v in env.items()}, params, guard)
        values = evaluator(e)
        return np.abs(values), term_scale(evaluator, e)

    parts = map_chunks(chunk, n, threads)
    absolute = np.concatenate([p[0] for p in parts])
    relative = absolute / np.concatenate([p[1] for p in parts])
    worst = int(np.argmax(relative))
    max_residual = float(relative[worst])
    passed = max_residual <= tol
    logger.debug("Zero test over %d points: max residual %.3e", n, max_residual)
    if passed:
        return ZeroTestResult(True, max_residual, n)
    return ZeroTestResult(False, max_residual, n, point_at(env, worst, params), float(absolute[worst]))
