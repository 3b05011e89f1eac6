"""
Pointwise curvature of symbolic metrics.

Christoffel symbols, Riemann, Ricci, scalar curvature and Weyl tensor are
computed numerically from exact first and second derivatives of the metric,
for whole batches of points at once.

Conventions:
    Gamma[k, i, j]      = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij)
    R[l, k, i, j]       = R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
                          + Gamma^l_{im} Gamma^m_{jk} - Gamma^l_{jm} Gamma^m_{ik}
    Ric[a, b]           = R^c_{acb}
    W[a, b, c, d]       = R_abcd - (g_a[c Ric_d]b - g_b[c Ric_d]a) + (s/3) g_a[c g_d]b
with antisymmetrisation brackets carrying the factor 1/2.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..config import DEFAULT_SAMPLES, DEFAULT_SEED, ToleranceConfig
from ..errors import EvaluationDomainError, SingularMetricError
from ..exprcore import DomainBox, Point
from ..exprcore.sampling import batch_reject, point_at, sample_points
from ..utils.helpers import map_chunks, relative_residual
from ..utils.logging import format_point, get_logger
from .chart import MetricTensor, point_env, with_lambda

logger = get_logger(__name__)


@dataclass
class CurvatureBundle:
    """Numeric curvature data at a single point."""

    point: Point
    g: np.ndarray
    g_inv: np.ndarray
    christoffel: np.ndarray
    """Gamma^k_ij indexed [k, i, j]"""

    riemann: np.ndarray
    """R^l_{kij} indexed [l, k, i, j]"""

    ricci: np.ndarray
    scalar: float
    weyl: np.ndarray
    """W_abcd, all indices down"""

    @property
    def riemann_lower(self) -> np.ndarray:
        """R_abcd = g_al R^l_bcd."""
        return np.einsum("al,lbcd->abcd", self.g, self.riemann)


@dataclass
class CurvatureBatch:
    """Curvature arrays with a leading batch axis of N points."""

    env: dict[str, np.ndarray]
    params: dict[str, float]
    g: np.ndarray
    g_inv: np.ndarray
    christoffel: np.ndarray
    riemann: np.ndarray
    ricci: np.ndarray
    scalar: np.ndarray
    weyl: np.ndarray

    @property
    def size(self) -> int:
        return self.g.shape[0]

    @property
    def riemann_lower(self) -> np.ndarray:
        return np.einsum("nal,nlbcd->nabcd", self.g, self.riemann)

    def at(self, index: int) -> CurvatureBundle:
        return CurvatureBundle(
            point=point_at(self.env, index, self.params),
            g=self.g[index],
            g_inv=self.g_inv[index],
            christoffel=self.christoffel[index],
            riemann=self.riemann[index],
            ricci=self.ricci[index],
            scalar=float(self.scalar[index]),
            weyl=self.weyl[index],
        )


def invert_metric(
    g: np.ndarray,
    singular_tol: float = 1e-10,
    condition_warning: float = 1e12,
) -> np.ndarray:
    """
    Invert a batch of metrics, rejecting singular ones.

    Args:
        g: Array of shape (N, n, n)
        singular_tol: Smallest admissible ``|det g|`` relative to the product of
            the row norms of g, which bounds ``|det g|`` from above
        condition_warning: Condition number above which a warning is logged

    Returns:
        Inverse metrics of shape (N, n, n)

    Raises:
        SingularMetricError: Some metric of the batch is singular
    """
    bound = np.prod(np.linalg.norm(g, axis=-1), axis=-1)
    det = np.linalg.det(g)
    singular = np.abs(det) <= singular_tol * bound
    if singular.any():
        index = int(np.argmax(singular))
        raise SingularMetricError(
            f"Metric is singular (det = {det[index]:.3e})",
            error_code="singular",
            details={"index": index, "det": float(det[index])},
        )
    cond = np.linalg.cond(g)
    if (cond > condition_warning).any():
        logger.warning("Ill-conditioned metric: condition number %.3e", float(cond.max()))
    return np.linalg.inv(g)


def curvature_from_jet(
    g: np.ndarray,
    dg: np.ndarray,
    ddg: np.ndarray,
    tolerance: Optional[ToleranceConfig] = None,
) -> tuple[np.ndarray, ...]:
    """
    Curvature arrays from metric values and derivatives.

    Returns:
        (g_inv, christoffel, riemann, ricci, scalar, weyl), each with a leading batch axis
    """
    tolerance = tolerance or ToleranceConfig()
    g_inv = invert_metric(g, tolerance.singular, tolerance.condition_warning)

    # Christoffel symbols of the first kind, Gl[l, i, j]
    gl = 0.5 * (
        np.einsum("nijl->nlij", dg) + np.einsum("njil->nlij", dg) - dg
    )
    gamma = np.einsum("nkl,nlij->nkij", g_inv, gl)

    dg_inv = -np.einsum("nka,nmab,nbl->nmkl", g_inv, dg, g_inv)
    dgl = 0.5 * (
        np.einsum("nmijl->nmlij", ddg) + np.einsum("nmjil->nmlij", ddg) - ddg
    )
    dgamma = np.einsum("nmkl,nlij->nmkij", dg_inv, gl) + np.einsum("nkl,nmlij->nmkij", g_inv, dgl)

    riemann = (
        np.einsum("niljk->nlkij", dgamma)
        - np.einsum("njlik->nlkij", dgamma)
        + np.einsum("nlim,nmjk->nlkij", gamma, gamma)
        - np.einsum("nljm,nmik->nlkij", gamma, gamma)
    )
    ricci = np.einsum("ncacb->nab", riemann)
    scalar = np.einsum("nab,nab->n", g_inv, ricci)
    weyl = weyl_tensor(g, np.einsum("nal,nlbcd->nabcd", g, riemann), ricci, scalar)
    return g_inv, gamma, riemann, ricci, scalar, weyl


def weyl_tensor(g: np.ndarray, r_lower: np.ndarray, ricci: np.ndarray, scalar: np.ndarray) -> np.ndarray:
    """4-dimensional Weyl tensor from the lowered Riemann tensor."""
    g_ric = 0.5 * (
        np.einsum("nac,ndb->nabcd", g, ricci)
        - np.einsum("nad,ncb->nabcd", g, ricci)
        - np.einsum("nbc,nda->nabcd", g, ricci)
        + np.einsum("nbd,nca->nabcd", g, ricci)
    )
    g_g = 0.5 * (np.einsum("nac,ndb->nabcd", g, g) - np.einsum("nad,ncb->nabcd", g, g))
    return r_lower - g_ric + (scalar / 3.0)[:, None, None, None, None] * g_g


def curvature_batch(
    metric: MetricTensor,
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
    tolerance: Optional[ToleranceConfig] = None,
) -> CurvatureBatch:
    """
    Curvature of ``metric`` at every point of a batch.

    Raises:
        EvaluationDomainError: A component is undefined at some point
        SingularMetricError: The metric is singular at some point
    """
    tolerance = tolerance or ToleranceConfig()
    jet = metric.jet(env, params, order=2, guard=tolerance.division_guard)
    if jet.bad.any():
        index = int(np.argmax(jet.bad))
        raise EvaluationDomainError(
            f"Metric '{metric.label}' is undefined at {point_at(env, index).as_dict()}",
            error_code="domain",
            details={"index": index},
        )
    assert jet.ddg is not None
    g_inv, gamma, riemann, ricci, scalar, weyl = curvature_from_jet(jet.g, jet.dg, jet.ddg, tolerance)
    return CurvatureBatch(
        env={k: np.asarray(v, dtype=float) for k, v in env.items()},
        params=dict(params),
        g=jet.g,
        g_inv=g_inv,
        christoffel=gamma,
        riemann=riemann,
        ricci=ricci,
        scalar=scalar,
        weyl=weyl,
    )


def curvature_at(
    metric: MetricTensor,
    point: Point,
    tolerance: Optional[ToleranceConfig] = None,
) -> CurvatureBundle:
    """Curvature of ``metric`` at a single point."""
    return curvature_batch(metric, point_env(point), point.params, tolerance).at(0)


def einstein_residual_at(
    metric: MetricTensor,
    lam: float,
    point: Point,
    tolerance: Optional[ToleranceConfig] = None,
) -> np.ndarray:
    """``Ric_ab - Lambda g_ab`` at a point, with ``Lambda`` also bound as a parameter."""
    params = with_lambda(point.params, lam)
    bundle = curvature_batch(metric, point_env(point), params, tolerance).at(0)
    return bundle.ricci - lam * bundle.g


def einstein_residuals(batch: CurvatureBatch, lam: float) -> np.ndarray:
    """Scale-relative Einstein residual per point."""
    residual = batch.ricci - lam * batch.g
    return relative_residual(residual, batch.ricci, lam * batch.g)


@dataclass
class ResidualMaximum:
    """Largest scale-relative residual over a sample and where it occurs."""

    value: float
    point: Point
    samples: int


def sample_metric_points(
    metric: MetricTensor,
    box: Optional[DomainBox],
    n: int,
    seed: int,
    params: Mapping[str, float],
) -> dict[str, np.ndarray]:
    """Sample points where every component of ``metric`` is defined."""
    box = box or metric.chart.box
    exprs = [metric.components[a][b] for a, b in metric.pairs()]
    return sample_points(box, n, seed, params, batch_reject(exprs, params))


def max_residual(
    metric: MetricTensor,
    lam: float,
    box: Optional[DomainBox] = None,
    n: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    threads: int = 1,
    tolerance: Optional[ToleranceConfig] = None,
) -> ResidualMaximum:
    """
    Maximum scale-relative Einstein residual over ``n`` seeded points.

    Args:
        metric: Metric to check
        lam: Cosmological constant (also bound to the ``Lambda`` parameter)
        box: Sampling domain (defaults to the chart's)
        n: Number of points
        seed: Base seed
        params: Further parameter values
        threads: Worker threads
        tolerance: Tolerance settings

    Returns:
        ResidualMaximum with the worst point
    """
    params = with_lambda(params, lam)
    env = sample_metric_points(metric, box, n, seed, params)

    def chunk(start: int, stop: int) -> np.ndarray:
        part = {k: v[start:stop] for k, v in env.items()}
        return einstein_residuals(curvature_batch(metric, part, params, tolerance), lam)

    residuals = np.concatenate(map_chunks(chunk, n, threads))
    worst = int(np.argmax(residuals))
    point = point_at(env, worst, params)
    logger.debug(
        "Einstein residual of %s over %d points: %.3e at %s",
        metric.label or "metric",
        n,
        residuals[worst],
        format_point(point.values),
    )
    return ResidualMaximum(float(residuals[worst]), point, n)


def symmetry_residuals(batch: CurvatureBatch) -> dict[str, float]:
    """
    Maximum scale-relative violations of the algebraic curvature identities.

    Keys: ``antisym_ab``, ``antisym_cd``, ``pair``, ``bianchi``, ``weyl_trace``,
    ``christoffel``.
    """
    r = batch.riemann_lower
    scale = 1.0 + np.abs(r).reshape(batch.size, -1).max(axis=1)
    bianchi = r + np.einsum("nabcd->nacdb", r) + np.einsum("nabcd->nadbc", r)
    weyl_scale = 1.0 + np.abs(batch.weyl).reshape(batch.size, -1).max(axis=1)
    weyl_trace = np.einsum("nac,nabcd->nbd", batch.g_inv, batch.weyl)
    gamma = batch.christoffel

    def worst(values: np.ndarray, s: np.ndarray) -> float:
        return float((np.abs(values).reshape(batch.size, -1).max(axis=1) / s).max())

    return {
        "antisym_ab": worst(r + np.einsum("nabcd->nbacd", r), scale),
        "antisym_cd": worst(r + np.einsum("nabcd->nabdc", r), scale),
        "pair": worst(r - np.einsum("nabcd->ncdab", r), scale),
        "bianchi": worst(bianchi, scale),
        "weyl_trace": worst(weyl_trace, weyl_scale),
        "christoffel": worst(gamma - np.einsum("nkij->nkji", gamma), np.ones(batch.size)),
    }


def scalar_trace_residual(batch: CurvatureBatch, lam: float) -> float:
    """
    Largest violation of ``s = n Lambda`` over the batch (Einstein metrics).

    The scalar curvature is the contraction ``g^ab Ric_ab``, bounded by
    ``|g^-1| |Ric|`` in Frobenius norms; the residual is relative to
    ``1 + |g^-1| |Ric|``.
    """
    n = batch.g.shape[-1]
    size = batch.size
    contraction = np.linalg.norm(batch.g_inv.reshape(size, -1), axis=1) * np.linalg.norm(
        batch.ricci.reshape(size, -1), axis=1
    )
    return float((np.abs(batch.scalar - n * lam) / (1.0 + contraction)).max())


__all__ = [
    "CurvatureBundle",
    "CurvatureBatch",
    "ResidualMaximum",
    "curvature_at",
    "curvature_batch",
    "curvature_from_jet",
    "einstein_residual_at",
    "einstein_residuals",
    "invert_metric",
    "max_residual",
    "sample_metric_points",
    "scalar_trace_residual",
    "symmetry_residuals",
    "weyl_tensor",
]
