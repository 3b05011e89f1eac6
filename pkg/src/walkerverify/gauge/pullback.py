"""
Numeric pullbacks of metrics and the comparison of h-families.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from ..config import DEFAULT_SEED, DIVISION_GUARD
from ..errors import EvaluationDomainError, PreconditionError
from ..exprcore import BatchEvaluator, DomainBox, Point
from ..exprcore.sampling import batch_reject, point_at, sample_points
from ..geometry import WALKER_COORDS, MetricTensor, point_env
from ..utils.logging import get_logger
from ..walker import ExprMatrix, WalkerMetric
from .flow import FlowTransform, integrate_flow
from .transforms import ClosedFormTransform

logger = get_logger(__name__)

Transform = Union[ClosedFormTransform, FlowTransform]

DEFAULT_FAMILY_TOL = 1e-8


def transform_jacobian(
    t: Transform,
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
) -> tuple[dict[str, np.ndarray], np.ndarray]:
    """
    Images of a batch of points and the Jacobians ``J[N, c, a] = d Phi^c / d x_new^a``.

    For a flow the v and u rows are those of the Walker shape and the u column
    of the x and y rows is the flow velocity.
    """
    if isinstance(t, ClosedFormTransform):
        if t.direction != "inverse":
            raise PreconditionError("Pullbacks need the old coordinates in terms of the new ones")
        return t.map_points(env, params), t.jacobian_values(env, params)
    flow = integrate_flow(t, env["x"], env["y"], env["u"], params)
    n = flow.x.shape[0]
    J = np.zeros((n, 4, 4))
    J[:, 0, 0] = 1.0
    J[:, 1:3, 1:3] = flow.jacobian
    J[:, 1:3, 3] = flow.velocity
    J[:, 3, 3] = 1.0
    images = {"v": np.asarray(env["v"], dtype=float), "x": flow.x, "y": flow.y, "u": flow.u}
    return images, J


def pullback_batch(
    g: MetricTensor,
    t: Transform,
    env: Mapping[str, np.ndarray],
    params: Optional[Mapping[str, float]] = None,
    guard: float = DIVISION_GUARD,
) -> np.ndarray:
    """
    ``g_new[N, a, b] = J[N, c, a] g_cd(Phi(p)) J[N, d, b]`` over a batch.

    Raises:
        FlowIntegrationError: A flow trajectory leaves its domain
        EvaluationDomainError: ``g`` is undefined at an image point
    """
    if g.chart.coords != WALKER_COORDS:
        raise PreconditionError("Pullbacks act on metrics in Walker coordinates")
    params = dict(params or {})
    images, J = transform_jacobian(t, env, params)
    jet = g.jet(images, params, order=0, guard=guard)
    if jet.bad.any():
        raise EvaluationDomainError("Metric is undefined at an image point", error_code="domain")
    return np.einsum("nca,ncd,ndb->nab", J, jet.g, J)


def pullback_at(
    g: MetricTensor,
    t: Transform,
    point: Point,
    guard: float = DIVISION_GUARD,
) -> np.ndarray:
    """The pulled back 4x4 matrix at a single point."""
    return pullback_batch(g, t, point_env(point), point.params, guard)[0]


@dataclass
class FamilyComparison:
    """Verdict of the h-family comparison."""

    equal: bool
    max_difference: float
    samples: int
    witness: Optional[dict[str, float]] = None

    @property
    def verdict(self) -> str:
        return "equal-family" if self.equal else "distinct"


def _family(h: Union[WalkerMetric, ExprMatrix]) -> ExprMatrix:
    return h.h if isinstance(h, WalkerMetric) else h


def _family_difference(
    h1: ExprMatrix,
    h2: ExprMatrix,
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
) -> np.ndarray:
    pairs = ((0, 0), (0, 1), (1, 1))
    e1 = BatchEvaluator(env, params)
    e2 = BatchEvaluator(env, params)
    a = np.stack([e1(h1[i][j]) for i, j in pairs], axis=-1)
    b = np.stack([e2(h2[i][j]) for i, j in pairs], axis=-1)
    if (e1.bad | e2.bad).any():
        raise EvaluationDomainError("An h-family is undefined on the sample", error_code="domain")
    scale = 1.0 + np.maximum(np.abs(a).max(axis=1), np.abs(b).max(axis=1))
    return np.abs(a - b).max(axis=1) / scale


def family_isometry_test(
    h1: Union[WalkerMetric, ExprMatrix],
    h2: Union[WalkerMetric, ExprMatrix],
    u0: float,
    box: DomainBox,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    tol: float = DEFAULT_FAMILY_TOL,
) -> FamilyComparison:
    """
    Compare two h-families that agree at ``u0``.

    Two Walker Einstein metrics with A = 0 whose families agree at ``u0`` are
    isometric exactly when the families agree for every u. The comparison is
    made in the given charts.

    Args:
        h1: First family (or a Walker metric carrying it)
        h2: Second family
        u0: Alignment time
        box: Sampling domain over x, y and u
        n: Number of points
        seed: Base seed
        params: Parameter values
        tol: Tolerance on the scale-relative component difference

    Returns:
        FamilyComparison with the worst point as witness when distinct

    Raises:
        PreconditionError: The families differ at ``u0``
    """
    params = dict(params or {})
    f1, f2 = _family(h1), _family(h2)
    exprs = [f1[0][0], f1[0][1], f1[1][1], f2[0][0], f2[0][1], f2[1][1]]
    reject = batch_reject(exprs, params)

    aligned_box = box.restrict(u=(u0, u0))
    aligned = sample_points(aligned_box, n, seed, params, reject)
    initial = _family_difference(f1, f2, aligned, params)
    if initial.max() > tol:
        worst = int(np.argmax(initial))
        raise PreconditionError(
            "initial metrics differ, align first",
            error_code="alignment",
            details={"point": point_at(aligned, worst).as_dict(), "difference": float(initial[worst])},
        )

    env = sample_points(box, n, seed + 1, params, reject)
    difference = _family_difference(f1, f2, env, params)
    worst = int(np.argmax(difference))
    result = FamilyComparison(
        equal=bool(difference[worst] <= tol),
        max_difference=float(difference[worst]),
        samples=n,
    )
    if not result.equal:
        result.witness = point_at(env, worst).as_dict()
    logger.debug("Family comparison: %s (max difference %.3e)", result.verdict, result.max_difference)
    return result


@dataclass
class FlowComparison:
    """Flow end points against a closed-form transformation at several u."""

    u: np.ndarray
    flow_x: np.ndarray
    flow_y: np.ndarray
    closed_x: np.ndarray
    closed_y: np.ndarray
    round_trip: float
    """Distance from the start after integrating back from the last u"""

    @property
    def deviation(self) -> np.ndarray:
        return np.hypot(self.flow_x - self.closed_x, self.flow_y - self.closed_y)

    @property
    def max_deviation(self) -> float:
        return float(self.deviation.max())


def compare_flow_with_closed_form(
    flow: FlowTransform,
    closed: ClosedFormTransform,
    x0: float,
    y0: float,
    u: np.ndarray,
    params: Mapping[str, float],
) -> FlowComparison:
    """
    Integrate the flow from ``(x0, y0)`` at ``flow.u0`` and evaluate the
    closed form at ``(0, x0, y0, u)`` for every u.

    Both give the source coordinates of the point whose new coordinates are
    ``(x0, y0)``.
    """
    u = np.atleast_1d(np.asarray(u, dtype=float))
    n = u.shape[0]
    xs, ys = np.full(n, float(x0)), np.full(n, float(y0))
    result = integrate_flow(flow, xs, ys, u, params)
    images = closed.map_points({"v": np.zeros(n), "x": xs, "y": ys, "u": u}, params)
    last = int(np.argmax(np.abs(u - flow.u0)))
    back = integrate_flow(flow, result.x[last], result.y[last], flow.u0, params, u_start=float(u[last]))
    round_trip = float(np.hypot(back.x[0] - x0, back.y[0] - y0))
    comparison = FlowComparison(u, result.x, result.y, images["x"], images["y"], round_trip)
    logger.debug("Flow against closed form: max deviation %.3e", comparison.max_deviation)
    return comparison


__all__ = [
    "Transform",
    "FlowComparison",
    "compare_flow_with_closed_form",
    "DEFAULT_FAMILY_TOL",
    "transform_jacobian",
    "pullback_batch",
    "pullback_at",
    "FamilyComparison",
    "family_isometry_test",
]
