"""
Petrov type and holonomy of Walker Einstein metrics.

T is either zero or of rank 2 at every point, so the type is II where
``det T != 0`` and D where it vanishes. The metric is indecomposable with
holonomy sim(2) unless T vanishes identically.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from ..config import DEFAULT_SEED, ToleranceConfig
from ..errors import PreconditionError
from ..exprcore import DomainBox, Point
from ..exprcore.sampling import batch_reject, sample_points
from ..geometry import WALKER_COORDS, point_env, with_lambda
from ..models import ClassificationRow, HolonomyType, LocusWitness, PetrovType
from ..utils.logging import format_point, get_logger
from ..walker import WalkerMetric, assemble
from .frame import T_at, T_batch

logger = get_logger(__name__)

# Points with |det T| within this factor of the threshold are flagged.
NEAR_FACTOR = 10.0


@dataclass
class PetrovDecision:
    """Type at one point with the quantities it was decided from."""

    petrov_type: PetrovType
    det: float
    threshold: float
    near_degenerate: bool


def decide_types(
    det: np.ndarray,
    norm_squared: np.ndarray,
    tol: float,
    lam: float = 0.0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Vectorised II/D decision.

    ``det T`` has the units of curvature squared and is compared with
    ``tol (Lambda^2 + |tr T^2|)``. For trace-free T, ``|tr T^2| = 2 |det T|``,
    so without a background curvature only an exactly vanishing T is type D,
    however small T is. With ``Lambda != 0`` a T below ``sqrt(tol) |Lambda|``
    counts as zero.

    Returns:
        Mask of type D points, mask of near-degenerate points and the thresholds
    """
    threshold = tol * (lam * lam + np.abs(norm_squared))
    magnitude = np.abs(det)
    is_d = magnitude <= threshold
    near = (~is_d) & (magnitude <= NEAR_FACTOR * threshold)
    return is_d, near, threshold


def petrov_type_at(
    w: WalkerMetric,
    lam: float,
    point: Point,
    tolerance: Optional[ToleranceConfig] = None,
) -> PetrovDecision:
    """
    Petrov type II or D at a point.

    D exactly when ``|det T| <= tol (Lambda^2 + |tr T^2|)``; near-degenerate points are
    flagged and logged rather than silently classified.
    """
    tolerance = tolerance or ToleranceConfig()
    t = T_at(w, lam, point, tolerance)
    is_d, near, threshold = decide_types(np.array([t.det]), np.array([t.norm_squared]), tolerance.det_t, lam)
    if near[0]:
        logger.warning("det T = %.3e at %s is near the type D threshold", t.det, format_point(point.values))
    return PetrovDecision(
        PetrovType.D if is_d[0] else PetrovType.II,
        t.det,
        float(threshold[0]),
        bool(near[0]),
    )


@dataclass
class HolonomyVerdict:
    """Sampled holonomy decision."""

    holonomy: HolonomyType
    max_abs_det: float
    samples: int
    note: str = ""

    @property
    def decomposable(self) -> bool:
        return self.holonomy == HolonomyType.DECOMPOSABLE


def holonomy_verdict(
    w: WalkerMetric,
    lam: float,
    box: Optional[DomainBox] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
) -> HolonomyVerdict:
    """
    sim(2) if some sampled point has type II, otherwise decomposable.

    The decomposable verdict only says that T vanishes on the sample.
    """
    tolerance = tolerance or ToleranceConfig()
    params = with_lambda(params, lam)
    metric = assemble(w)
    exprs = [metric.components[a][b] for a, b in metric.pairs()]
    env = sample_points(box or w.box, n, seed, params, batch_reject(exprs, params))
    t = T_batch(w, lam, env, params, tolerance, metric)
    is_d, _, _ = decide_types(t.det, t.norm_squared, tolerance.det_t, lam)
    max_det = float(np.abs(t.det).max())
    if is_d.all():
        return HolonomyVerdict(
            HolonomyType.DECOMPOSABLE,
            max_det,
            n,
            f"T = 0 on all {n} sampled points",
        )
    return HolonomyVerdict(HolonomyType.INDECOMPOSABLE, max_det, n)


def grid_points(
    grid: Mapping[str, tuple[float, float, int]],
    fixed: Optional[Mapping[str, float]] = None,
) -> dict[str, np.ndarray]:
    """
    Cartesian product of evenly spaced values, other coordinates held fixed.

    Args:
        grid: Coordinate name to (low, high, count)
        fixed: Values of the coordinates not in ``grid``

    Returns:
        Batch with one entry per grid point, the last coordinate varying fastest
    """
    fixed = dict(fixed or {})
    unknown = set(grid) - set(WALKER_COORDS)
    if unknown:
        raise PreconditionError(f"Unknown grid coordinates {sorted(unknown)}", error_code="grid")
    missing = [c for c in WALKER_COORDS if c not in grid and c not in fixed]
    if missing:
        raise PreconditionError(f"No value for coordinates {missing}", error_code="grid")
    axes = [
        np.linspace(*grid[c][:2], int(grid[c][2])) if c in grid else np.array([float(fixed[c])])
        for c in WALKER_COORDS
    ]
    rows = np.array(list(itertools.product(*axes)))
    return {c: rows[:, k].copy() for k, c in enumerate(WALKER_COORDS)}


def classify_grid(
    w: WalkerMetric,
    lam: float,
    grid: Mapping[str, tuple[float, float, int]],
    fixed: Optional[Mapping[str, float]] = None,
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
) -> list[ClassificationRow]:
    """
    T, det T and the Petrov type over a coordinate grid.

    Coordinates missing from ``grid`` and ``fixed`` are an error; the box
    midpoint is not substituted silently.
    """
    tolerance = tolerance or ToleranceConfig()
    env = grid_points(grid, fixed)
    t = T_batch(w, lam, env, params, tolerance)
    det = t.det
    is_d, near, _ = decide_types(det, t.norm_squared, tolerance.det_t, lam)
    rows = []
    for i in range(len(det)):
        rows.append(
            ClassificationRow(
                point={c: float(env[c][i]) for c in WALKER_COORDS},
                T=[[float(c) for c in row] for row in t.T[i]],
                det_T=float(det[i]),
                trace_T=float(np.trace(t.T[i])),
                petrov_type=PetrovType.D if is_d[i] else PetrovType.II,
                near_degenerate=bool(near[i]),
            )
        )
    logger.debug("Classified %d grid points of %s", len(rows), w.label or "metric")
    return rows


def petrov_locus_root(
    w: WalkerMetric,
    lam: float,
    base: Mapping[str, float],
    coordinate: str,
    bracket: tuple[float, float],
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
    offset: float = 1e-2,
) -> LocusWitness:
    """
    Locate a zero of T along one coordinate by root bracketing.

    ``det T`` does not change sign at the locus, so the bracketing is done on
    the first entry of T whose sign differs at the ends of ``bracket``. The
    type is then evaluated at the root and at ``root -+ offset``.

    Raises:
        PreconditionError: No entry of T changes sign over the bracket
    """
    tolerance = tolerance or ToleranceConfig()
    params = with_lambda(params, lam)
    base = {c: float(base[c]) for c in WALKER_COORDS if c != coordinate}

    def point(value: float) -> Point:
        return Point({**base, coordinate: float(value)}, params)

    def entries(value: float) -> np.ndarray:
        p = point(value)
        return T_batch(w, lam, point_env(p), params, tolerance).T[0]

    lo, hi = bracket
    at_lo, at_hi = entries(lo), entries(hi)
    candidates = [(i, j) for i in range(2) for j in range(2) if at_lo[i, j] * at_hi[i, j] < 0]
    if not candidates:
        raise PreconditionError(
            f"No entry of T changes sign for {coordinate} in [{lo}, {hi}]",
            error_code="bracket",
        )
    i, j = candidates[0]
    root = float(brentq(lambda s: entries(s)[i, j], lo, hi, xtol=1e-14, rtol=1e-14))

    def kind(value: float) -> tuple[PetrovType, float]:
        decision = petrov_type_at(w, lam, point(value), tolerance)
        return decision.petrov_type, decision.det

    at_root, det_root = kind(root)
    left, _ = kind(root - offset)
    right, _ = kind(root + offset)
    logger.debug("Type D locus at %s = %.12f (det T = %.3e)", coordinate, root, det_root)
    return LocusWitness(
        coordinate=coordinate,
        value=root,
        point=point(root).as_dict(),
        det_T=det_root,
        petrov_type=at_root,
        left_type=left,
        right_type=right,
    )


__all__ = [
    "NEAR_FACTOR",
    "PetrovDecision",
    "HolonomyVerdict",
    "decide_types",
    "petrov_type_at",
    "holonomy_verdict",
    "grid_points",
    "classify_grid",
    "petrov_locus_root",
]
