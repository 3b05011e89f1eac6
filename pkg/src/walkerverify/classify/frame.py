"""
The null frame of a Walker Einstein metric and its curvature endomorphism.

For A = 0 and H = Lambda v^2 + H0 the vectors ``p = d_v`` and
``q = d_u - (1/2) H d_v`` are null with ``g(p, q) = 1`` and span the
orthogonal complement of ``E = <d_x, d_y>``. The endomorphism
``T(X) = -R(X, q) q`` of E carries the whole Weyl curvature beyond its
constant-curvature part.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import ToleranceConfig
from ..errors import GaugeViolationError, PreconditionError
from ..exprcore import ZERO, Point
from ..geometry import CurvatureBatch, MetricTensor, curvature_batch, einstein_residuals, point_env, with_lambda
from ..utils.logging import get_logger
from ..walker import WalkerMetric, assemble

logger = get_logger(__name__)

FRAME_TOL = 1e-10
AGREEMENT_TOL = 1e-9

# Walker coordinate indices
V, X, Y, U = 0, 1, 2, 3
E_INDICES = (X, Y)


@dataclass
class NullFrame:
    """Frame vectors at one point, as coordinate components."""

    p: np.ndarray
    q: np.ndarray
    E: np.ndarray
    """Shape (2, 4): d_x and d_y"""

    @classmethod
    def at(cls, g: np.ndarray) -> NullFrame:
        """Frame from the metric matrix at a point (uses ``H = g_uu``)."""
        p = np.array([1.0, 0.0, 0.0, 0.0])
        q = np.array([-0.5 * g[U, U], 0.0, 0.0, 1.0])
        E = np.eye(4)[list(E_INDICES)]
        return cls(p, q, E)

    def residual(self, g: np.ndarray) -> float:
        """Largest deviation from the null frame relations, relative to ``1 + max |g|``."""
        inner = lambda a, b: float(a @ g @ b)  # noqa: E731
        deviations = [
            inner(self.p, self.p),
            inner(self.p, self.q) - 1.0,
            inner(self.q, self.q),
            *(inner(self.p, e) for e in self.E),
            *(inner(self.q, e) for e in self.E),
        ]
        return max(abs(d) for d in deviations) / (1.0 + float(np.abs(g).max()))


@dataclass
class TEndomorphism:
    """``T_i^j`` at one point, with ``T(d_i) = T_i^j d_j``."""

    matrix: np.ndarray
    h: np.ndarray
    point: Point
    frame_agreement: float = 0.0
    """Scale-relative difference between the frame and index computations"""

    einstein_residual: float = 0.0

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.matrix))

    @property
    def trace(self) -> float:
        return float(np.trace(self.matrix))

    @property
    def norm_squared(self) -> float:
        """``T_i^j T_j^i``, nonnegative for h-symmetric T."""
        return float(np.trace(self.matrix @ self.matrix))

    @property
    def symmetry_residual(self) -> float:
        """Asymmetry of ``h(T X, Y)`` relative to ``1 + max |T h|``."""
        lowered = self.matrix @ self.h
        return float(np.abs(lowered - lowered.T).max() / (1.0 + np.abs(lowered).max()))

    @property
    def trace_residual(self) -> float:
        return abs(self.trace) / (1.0 + float(np.abs(self.matrix).max()))

    def as_lists(self) -> list[list[float]]:
        return [[float(c) for c in row] for row in self.matrix]


def require_reduced_gauge(w: WalkerMetric) -> None:
    """
    Structural check of A = 0 and H = Lambda v^2 + H0.

    Raises:
        GaugeViolationError: A is present
        PreconditionError: H has no ansatz form or H1 is not zero
    """
    if w.has_A:
        raise GaugeViolationError(
            f"Metric '{w.label}' has A != 0; integrate the gauge flow first",
            error_code="gauge",
        )
    if w.ansatz is None:
        raise PreconditionError(
            f"H of '{w.label}' does not have the form Lambda v^2 + H1 v + H0",
            error_code="ansatz",
        )
    if w.ansatz.H1 != ZERO:
        raise PreconditionError(f"H1 of '{w.label}' must vanish; apply the v-shift first", error_code="gauge")


def t_from_batch(batch: CurvatureBatch) -> tuple[np.ndarray, np.ndarray]:
    """
    T over a batch, by the index formula and by frame contraction.

    Returns:
        Two arrays of shape (N, 2, 2) indexed [N, i, j] = T_i^j
    """
    idx = list(E_INDICES)
    # T_i^j = -R^j_{u i u}
    index_form = -np.swapaxes(batch.riemann[:, :, U, :, U], 1, 2)[:, idx][:, :, idx]
    return index_form, _t_frame(batch)


def _t_frame(batch: CurvatureBatch) -> np.ndarray:
    n = batch.size
    q = np.zeros((n, 4))
    q[:, V] = -0.5 * batch.g[:, U, U]
    q[:, U] = 1.0
    # T(d_i)^l = -R^l_{k i j} q^k q^j
    full = -np.einsum("nlkij,nk,nj->nil", batch.riemann, q, q)
    idx = list(E_INDICES)
    return full[:, idx][:, :, idx]


@dataclass
class TBatch:
    """T over a batch of points together with its curvature."""

    curvature: CurvatureBatch
    T: np.ndarray
    frame_agreement: np.ndarray
    einstein: np.ndarray

    @property
    def det(self) -> np.ndarray:
        return np.linalg.det(self.T)

    @property
    def norm_squared(self) -> np.ndarray:
        return np.einsum("nij,nji->n", self.T, self.T)

    def at(self, index: int) -> TEndomorphism:
        idx = list(E_INDICES)
        return TEndomorphism(
            matrix=self.T[index],
            h=self.curvature.g[index][idx][:, idx],
            point=self.curvature.at(index).point,
            frame_agreement=float(self.frame_agreement[index]),
            einstein_residual=float(self.einstein[index]),
        )


def T_batch(
    w: WalkerMetric,
    lam: float,
    env: Mapping[str, np.ndarray],
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
    metric: Optional[MetricTensor] = None,
) -> TBatch:
    """
    T at every point of a batch.

    Args:
        w: Walker metric in the reduced gauge
        lam: Cosmological constant
        env: Coordinates of the points
        params: Further parameter values
        tolerance: Tolerance settings
        metric: Assembled metric of ``w`` when already available

    Returns:
        TBatch

    Raises:
        GaugeViolationError: A is present
    """
    require_reduced_gauge(w)
    tolerance = tolerance or ToleranceConfig()
    params = with_lambda(params, lam)
    batch = curvature_batch(metric or assemble(w), env, params, tolerance)
    index_form, frame_form = t_from_batch(batch)
    scale = 1.0 + np.abs(index_form).reshape(batch.size, -1).max(axis=1)
    agreement = np.abs(index_form - frame_form).reshape(batch.size, -1).max(axis=1) / scale
    if (agreement > AGREEMENT_TOL).any():
        logger.warning("Frame and index forms of T differ by %.3e", float(agreement.max()))
    einstein = einstein_residuals(batch, lam)
    if (einstein > tolerance.einstein).any():
        logger.warning(
            "Metric '%s' is not Einstein on the sample (residual %.3e); T is reported anyway",
            w.label,
            float(einstein.max()),
        )
    return TBatch(batch, index_form, agreement, einstein)


def T_at(
    w: WalkerMetric,
    lam: float,
    point: Point,
    tolerance: Optional[ToleranceConfig] = None,
) -> TEndomorphism:
    """
    The curvature endomorphism ``T_i^j = -R^j_{u i u}`` at a point.

    Raises:
        GaugeViolationError: A is present
        PreconditionError: H1 is not zero
    """
    return T_batch(w, lam, point_env(point), point.params, tolerance).at(0)


__all__ = [
    "FRAME_TOL",
    "AGREEMENT_TOL",
    "E_INDICES",
    "NullFrame",
    "TEndomorphism",
    "TBatch",
    "require_reduced_gauge",
    "t_from_batch",
    "T_batch",
    "T_at",
]
