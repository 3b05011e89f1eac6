"""
The reduced Einstein system of Walker metrics and its two-dimensional forms.

In the gauge A = 0, H1 = 0 the Einstein equations for the Walker metric
reduce to conditions on the family h(u) and on H0. When h is the fixed
constant-curvature background and A is built from a potential f, they reduce
further to a pair of linear equations for f and H0 on the round sphere
(Lambda > 0) or on the hyperbolic plane (Lambda < 0).
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import asdict, dataclass
from math import pi
from typing import Optional

import numpy as np

from ..config import DEFAULT_SEED, ToleranceConfig
from ..errors import EvaluationDomainError, GaugeViolationError, PreconditionError
from ..exprcore import (
    ZERO,
    BatchEvaluator,
    DomainBox,
    Expr,
    as_expr,
    cot,
    differentiate,
    parse,
    sin,
    var,
)
from ..exprcore.sampling import batch_reject, sample_points
from ..geometry import with_lambda
from ..geometry.curvature import curvature_from_jet
from ..killing import DEFAULT_KILLING_TOL, killing_oneform_check
from ..utils.helpers import relative_residual
from ..utils.logging import get_logger
from .metric import LAMBDA_EXPR, SURFACE_NAMES, EinsteinAnsatz, ExprMatrix, Signature, WalkerMetric

logger = get_logger(__name__)

X = var("x")

# Sampling boxes of the two backgrounds; x stays away from the poles of the
# sphere chart and from the boundary x = 0 of the half-plane.
SPHERE_BOX = DomainBox.of(v=(-1.0, 1.0), x=(0.4, pi - 0.4), y=(-1.0, 1.0), u=(-0.5, 0.5))
HYPERBOLIC_BOX = DomainBox.of(v=(-1.0, 1.0), x=(0.3, 2.0), y=(-1.0, 1.0), u=(-0.5, 0.5))
DEFAULT_LAMBDA: dict[str, float] = {"sphere": 1.0, "hyperbolic": -1.0}


def default_box(signature: Signature) -> DomainBox:
    return SPHERE_BOX if signature == "sphere" else HYPERBOLIC_BOX


def _check_signature(signature: str) -> None:
    if signature not in ("sphere", "hyperbolic"):
        raise PreconditionError(
            f"Unknown signature '{signature}'",
            error_code="signature",
            details={"signature": signature},
        )


def sphere_laplacian(phi: Expr) -> Expr:
    """Laplacian of the unit sphere, ``d_x^2 + d_y^2 / sin^2 x + cot x d_x``."""
    phi_x = differentiate(phi, "x")
    return (
        differentiate(phi_x, "x")
        + differentiate(differentiate(phi, "y"), "y") / sin(X) ** 2
        + cot(X) * phi_x
    )


def hyperbolic_laplacian(phi: Expr) -> Expr:
    """Laplacian of the unit hyperbolic half-plane, ``x^2 (d_x^2 + d_y^2)``."""
    return X ** 2 * (
        differentiate(differentiate(phi, "x"), "x") + differentiate(differentiate(phi, "y"), "y")
    )


def sphere_f_residual(f: Expr) -> Expr:
    """Left minus right of ``Delta f = -2 f`` on the sphere."""
    return sphere_laplacian(f) + 2 * f


def sphere_H0_residual(
    f: Expr,
    H0: Expr,
    lam: Expr | float = LAMBDA_EXPR,
    printed: bool = False,
) -> Expr:
    """
    Left minus right of the H0 equation on the sphere.

    Args:
        f: Potential
        H0: Candidate H0
        lam: Cosmological constant (the ``Lambda`` parameter by default)
        printed: Use ``+ f_y^2 / sin^2 x`` in place of the consistent
            ``- f_y^2 / sin^2 x``

    Returns:
        Expression that vanishes identically for a solution
    """
    lam = as_expr(lam)
    f_x = differentiate(f, "x")
    f_y = differentiate(f, "y")
    gradient_y = f_y ** 2 / sin(X) ** 2
    source = 2 * f ** 2 - f_x ** 2
    source = source + gradient_y if printed else source - gradient_y
    return sphere_laplacian(H0) - 2 * lam * source


def hyperbolic_f_residual(f: Expr) -> Expr:
    """Left minus right of ``Delta f = 2 f`` on the hyperbolic plane."""
    return hyperbolic_laplacian(f) - 2 * f


def hyperbolic_H0_residual(f: Expr, H0: Expr, lam: Expr | float = LAMBDA_EXPR) -> Expr:
    """Left minus right of ``Delta H0 = -4 Lambda f^2 - 2 Lambda x^2 |grad f|^2``."""
    lam = as_expr(lam)
    f_x = differentiate(f, "x")
    f_y = differentiate(f, "y")
    return (
        hyperbolic_laplacian(H0)
        + 4 * lam * f ** 2
        + 2 * lam * X ** 2 * (f_x ** 2 + f_y ** 2)
    )


@dataclass(frozen=True)
class PotentialFunction:
    """A potential f(x, y, u) on one of the two constant-curvature backgrounds."""

    f: Expr
    signature: Signature

    def __post_init__(self) -> None:
        _check_signature(self.signature)
        if differentiate(self.f, "v") != ZERO:
            raise PreconditionError("The potential must not depend on v")

    @classmethod
    def from_text(cls, text: str, signature: Signature) -> PotentialFunction:
        return cls(parse(text, SURFACE_NAMES), signature)

    def f_residual(self) -> Expr:
        if self.signature == "sphere":
            return sphere_f_residual(self.f)
        return hyperbolic_f_residual(self.f)

    def H0_residual(self, H0: Expr, lam: Expr | float = LAMBDA_EXPR) -> Expr:
        if self.signature == "sphere":
            return sphere_H0_residual(self.f, H0, lam)
        return hyperbolic_H0_residual(self.f, H0, lam)


def f_to_A(potential: PotentialFunction) -> tuple[Expr, Expr]:
    """
    The one-form A defined by a potential.

    Sphere: ``A = -(f_y / sin x) dx + sin x f_x dy``; hyperbolic plane:
    ``A = -f_y dx + f_x dy``.
    """
    f_x = differentiate(potential.f, "x")
    f_y = differentiate(potential.f, "y")
    if potential.signature == "sphere":
        return (-(f_y / sin(X)), sin(X) * f_x)
    return (-f_y, f_x)


def particular_H0(f: Expr, lam: Expr | float = LAMBDA_EXPR) -> Expr:
    """``-Lambda f^2``, which solves the H0 equation whenever f solves the first one."""
    return -(as_expr(lam) * f ** 2)


def sphere_background(lam: Expr | float = LAMBDA_EXPR) -> ExprMatrix:
    """``(1/Lambda)(dx^2 + sin^2 x dy^2)``."""
    lam = as_expr(lam)
    return ((1 / lam, ZERO), (ZERO, sin(X) ** 2 / lam))


def hyperbolic_background(lam: Expr | float = LAMBDA_EXPR) -> ExprMatrix:
    """``(1 / (-Lambda x^2))(dx^2 + dy^2)``."""
    factor = 1 / (-(as_expr(lam) * X ** 2))
    return ((factor, ZERO), (ZERO, factor))


def background(signature: Signature, lam: Expr | float = LAMBDA_EXPR) -> ExprMatrix:
    _check_signature(signature)
    return sphere_background(lam) if signature == "sphere" else hyperbolic_background(lam)


def assemble_from_potential(
    potential: PotentialFunction,
    H0: Optional[Expr] = None,
    box: Optional[DomainBox] = None,
    label: str = "",
) -> WalkerMetric:
    """
    Walker metric on the constant-curvature background with ``A = f_to_A(f)``.

    Args:
        potential: Potential and signature
        H0: H0 of the ansatz (defaults to ``-Lambda f^2``)
        box: Domain box (defaults to the background's)
        label: Metric label

    Returns:
        WalkerMetric with H = Lambda v^2 + H0
    """
    ansatz = EinsteinAnsatz(H0 if H0 is not None else particular_H0(potential.f))
    return WalkerMetric.from_ansatz(
        background(potential.signature),
        f_to_A(potential),
        ansatz,
        box or default_box(potential.signature),
        label,
    )


def killing_family_check(
    potential: PotentialFunction,
    box: Optional[DomainBox] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    tol: float = DEFAULT_KILLING_TOL,
) -> bool:
    """
    Whether ``f_to_A(f)`` is a Killing form of the background.

    The background is scaled by the sign-matching default Lambda unless
    ``params`` binds ``Lambda``.
    """
    params = dict(params or {})
    params.setdefault("Lambda", DEFAULT_LAMBDA[potential.signature])
    w = assemble_from_potential(potential, box=box)
    result = killing_oneform_check(w.surface(), w.A, box or w.box, n, seed, params, tol)
    logger.debug("Killing family check of %s: %s", potential.f, result.passed)
    return result.passed


@dataclass
class ReducedSystemResiduals:
    """Largest scale-relative residuals of the reduced system over a sample."""

    poisson: float
    """``Delta_h H0 + (1/2) h^ij h''_ij``"""

    divergence: tuple[float, float]
    """Components of the covariant divergence of h'"""

    trace: float
    """``h^ij h'_ij``"""

    einstein: float
    """``Ric(h) - Lambda h``"""

    samples: int

    def maximum(self) -> float:
        return max(self.poisson, *self.divergence, self.trace, self.einstein)

    def passed(self, tol: float = 1e-7) -> bool:
        return self.maximum() < tol

    def as_dict(self) -> dict[str, float]:
        values = asdict(self)
        values["divergence"] = list(self.divergence)
        return values


def _evaluate_matrix(evaluator: BatchEvaluator, m: ExprMatrix) -> np.ndarray:
    out = np.zeros((evaluator.size, 2, 2))
    out[:, 0, 0] = evaluator(m[0][0])
    out[:, 0, 1] = out[:, 1, 0] = evaluator(m[0][1])
    out[:, 1, 1] = evaluator(m[1][1])
    return out


def reduced_system_residuals(
    w: WalkerMetric,
    lam: float,
    box: Optional[DomainBox] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
) -> ReducedSystemResiduals:
    """
    Residuals of the reduced Einstein system in the gauge A = 0, H1 = 0.

    Derivatives in u are symbolic; the connection of h is taken at fixed u.

    Args:
        w: Walker metric with A = 0 and the Einstein ansatz with H1 = 0
        lam: Cosmological constant
        box: Sampling domain (defaults to the metric's)
        n: Number of points
        seed: Base seed
        params: Further parameter values
        tolerance: Tolerance settings

    Returns:
        ReducedSystemResiduals

    Raises:
        GaugeViolationError: A is not zero
        PreconditionError: No ansatz, or H1 is not zero
        SingularMetricError: h is singular at a sampled point
    """
    if w.has_A:
        raise GaugeViolationError(
            "The reduced system needs A = 0; integrate the gauge flow first",
            error_code="gauge",
        )
    if w.ansatz is None:
        raise PreconditionError("H does not have the form Lambda v^2 + H1 v + H0", error_code="ansatz")
    if w.ansatz.H1 != ZERO:
        raise PreconditionError(
            "H1 must vanish; apply vshift_remove_H1 first",
            error_code="gauge",
        )
    tolerance = tolerance or ToleranceConfig()
    params = with_lambda(params, lam)
    box = box or w.box
    surface = w.surface()
    H0 = w.ansatz.H0
    h_dot = w.h_dot(1)
    h_ddot = w.h_dot(2)
    coords = ("x", "y")
    dH0 = [differentiate(H0, c) for c in coords]
    ddH0 = [[differentiate(d, c) for c in coords] for d in dH0]
    d_h_dot = [
        tuple(tuple(differentiate(e, c) for e in row) for row in h_dot)
        for c in coords
    ]
    exprs = [*h_dot[0], h_dot[1][1], *h_ddot[0], h_ddot[1][1], H0, *dH0, *ddH0[0], ddH0[1][1]]
    exprs += [surface.components[a][b] for a, b in surface.pairs()]
    env = sample_points(box, n, seed, params, batch_reject(exprs, params, tolerance.division_guard))

    jet = surface.jet(env, params, order=2, guard=tolerance.division_guard)
    evaluator = BatchEvaluator(env, params, tolerance.division_guard)
    hd = _evaluate_matrix(evaluator, h_dot)
    hdd = _evaluate_matrix(evaluator, h_ddot)
    dhd = np.stack([_evaluate_matrix(evaluator, m) for m in d_h_dot], axis=1)  # [N, k, i, j]
    grad = np.stack([evaluator(d) for d in dH0], axis=-1)
    hess = np.stack([np.stack([evaluator(e) for e in row], axis=-1) for row in ddH0], axis=-2)
    if (jet.bad | evaluator.bad).any():
        raise EvaluationDomainError("Reduced system is undefined on the sample", error_code="domain")
    assert jet.ddg is not None
    h_inv, gamma, _, ricci, _, _ = curvature_from_jet(jet.g, jet.dg, jet.ddg, tolerance)

    laplacian_terms = hess - np.einsum("nkij,nk->nij", gamma, grad)
    laplacian = np.einsum("nij,nij->n", h_inv, laplacian_terms)
    source = 0.5 * np.einsum("nij,nij->n", h_inv, hdd)
    poisson = relative_residual(laplacian + source, laplacian, source)

    covariant = (
        dhd
        - np.einsum("nmki,nmj->nkij", gamma, hd)
        - np.einsum("nmkj,nim->nkij", gamma, hd)
    )
    divergence = np.einsum("njk,nkij->ni", h_inv, covariant)
    div_scale = np.abs(dhd).reshape(len(divergence), -1).max(axis=1)
    div_residual = np.abs(divergence) / (1.0 + div_scale)[:, None]

    trace = np.einsum("nij,nij->n", h_inv, hd)
    trace_residual = relative_residual(trace, hd)
    einstein = relative_residual(ricci - lam * jet.g, ricci, lam * jet.g)

    result = ReducedSystemResiduals(
        poisson=float(poisson.max()),
        divergence=(float(div_residual[:, 0].max()), float(div_residual[:, 1].max())),
        trace=float(trace_residual.max()),
        einstein=float(einstein.max()),
        samples=n,
    )
    logger.debug("Reduced system residuals of %s: %s", w.label or "metric", result.as_dict())
    return result


__all__ = [
    "SPHERE_BOX",
    "HYPERBOLIC_BOX",
    "DEFAULT_LAMBDA",
    "default_box",
    "sphere_laplacian",
    "hyperbolic_laplacian",
    "sphere_f_residual",
    "sphere_H0_residual",
    "hyperbolic_f_residual",
    "hyperbolic_H0_residual",
    "PotentialFunction",
    "f_to_A",
    "particular_H0",
    "sphere_background",
    "hyperbolic_background",
    "background",
    "assemble_from_potential",
    "killing_family_check",
    "ReducedSystemResiduals",
    "reduced_system_residuals",
]
