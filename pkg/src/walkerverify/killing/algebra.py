"""
Certificates that a list of Killing fields spans a Lie algebra.

Brackets are expanded in the listed fields by least squares over sampled
points; the recovered structure constants are then checked for the Jacobi
identity. Maximality of the algebra is not certified.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import DEFAULT_SEED
from ..exprcore import DomainBox
from ..exprcore.sampling import batch_reject, sample_points
from ..geometry import MetricTensor
from ..utils.logging import get_logger
from .fields import DEFAULT_KILLING_TOL, VectorField, field_values, killing_residual, lie_bracket

logger = get_logger(__name__)

DEFAULT_FIT_TOL = 1e-8
DEFAULT_FIT_SAMPLES = 50


@dataclass
class BracketFit:
    """Expansion of one bracket in the listed fields."""

    i: int
    j: int
    coefficients: list[float]
    residual: float


@dataclass
class AlgebraCertificate:
    """Killing residuals, structure constants and the closure verdict."""

    labels: list[str]
    killing_residuals: list[float]
    brackets: list[BracketFit] = field(default_factory=list)
    structure_constants: list[list[list[float]]] = field(default_factory=list)
    jacobi_residual: float = 0.0
    antisymmetry_residual: float = 0.0
    killing_tol: float = DEFAULT_KILLING_TOL
    fit_tol: float = DEFAULT_FIT_TOL

    @property
    def dimension(self) -> int:
        return len(self.labels)

    @property
    def all_killing(self) -> bool:
        return all(r < self.killing_tol for r in self.killing_residuals)

    @property
    def closed(self) -> bool:
        return all(b.residual < self.fit_tol for b in self.brackets)

    @property
    def abelian(self) -> bool:
        return all(abs(c) < self.fit_tol for b in self.brackets for c in b.coefficients)

    @property
    def passed(self) -> bool:
        return self.all_killing and self.closed and self.jacobi_residual < self.fit_tol

    @property
    def verdict(self) -> str:
        if not self.all_killing:
            return "not killing"
        return "closed algebra" if self.closed else "not closed"


def fit_in_span(
    target: np.ndarray,
    basis: np.ndarray,
) -> tuple[np.ndarray, float]:
    """
    Least-squares expansion of sampled field values in sampled basis fields.

    Args:
        target: Values of shape (N, dim)
        basis: Values of shape (m, N, dim)

    Returns:
        Coefficients of shape (m,) and the scale-relative fit residual
    """
    m = basis.shape[0]
    matrix = basis.reshape(m, -1).T
    rhs = target.reshape(-1)
    coefficients, *_ = np.linalg.lstsq(matrix, rhs, rcond=None)
    misfit = matrix @ coefficients - rhs
    scale = 1.0 + max(np.abs(rhs).max(initial=0.0), np.abs(matrix).max(initial=0.0))
    return coefficients, float(np.abs(misfit).max(initial=0.0) / scale)


def jacobi_violation(constants: np.ndarray) -> float:
    """Largest component of the Jacobi identity for structure constants ``C[i, j, k]``."""
    # [[e_i, e_j], e_k] = C_ij^l C_lk^m e_m
    term = np.einsum("ijl,lkm->ijkm", constants, constants)
    cyclic = term + np.einsum("ijkm->jkim", term) + np.einsum("ijkm->kijm", term)
    return float(np.abs(cyclic).max(initial=0.0))


def algebra_certificate(
    metric: MetricTensor,
    fields: Sequence[VectorField],
    box: Optional[DomainBox] = None,
    n: int = 500,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    fit_samples: int = DEFAULT_FIT_SAMPLES,
    killing_tol: float = DEFAULT_KILLING_TOL,
    fit_tol: float = DEFAULT_FIT_TOL,
) -> AlgebraCertificate:
    """
    Certify that ``fields`` are Killing fields of ``metric`` closing under bracket.

    Args:
        metric: The metric
        fields: Listed Killing fields (at least one)
        box: Sampling domain (defaults to the chart's)
        n: Points for the Killing residuals
        seed: Base seed
        params: Parameter values
        fit_samples: Points for the bracket fits
        killing_tol: Tolerance on Killing residuals
        fit_tol: Tolerance on bracket fits

    Returns:
        AlgebraCertificate
    """
    if not fields:
        raise ValueError("At least one vector field is required")
    params = dict(params or {})
    box = box or metric.chart.box
    residuals = [killing_residual(metric, f, box, n, seed, params).value for f in fields]

    m = len(fields)
    pairs = [(i, j) for i in range(m) for j in range(i + 1, m)]
    brackets = {pair: lie_bracket(fields[pair[0]], fields[pair[1]]) for pair in pairs}
    exprs = [c for f in list(fields) + list(brackets.values()) for c in f.components]
    env = sample_points(box, fit_samples, seed + 1, params, batch_reject(exprs, params))
    basis = field_values(fields, env, params)

    constants = np.zeros((m, m, m))
    fits: list[BracketFit] = []
    antisymmetry = 0.0
    for (i, j), bracket in brackets.items():
        target = field_values([bracket], env, params)[0]
        coefficients, misfit = fit_in_span(target, basis)
        constants[i, j] = coefficients
        constants[j, i] = -coefficients
        fits.append(BracketFit(i, j, [float(c) for c in coefficients], misfit))
        reverse = field_values([lie_bracket(fields[j], fields[i])], env, params)[0]
        antisymmetry = max(antisymmetry, float(np.abs(target + reverse).max(initial=0.0)))

    certificate = AlgebraCertificate(
        labels=[f.label or f.describe() for f in fields],
        killing_residuals=residuals,
        brackets=fits,
        structure_constants=constants.tolist(),
        jacobi_residual=jacobi_violation(constants),
        antisymmetry_residual=antisymmetry,
        killing_tol=killing_tol,
        fit_tol=fit_tol,
    )
    logger.debug("Algebra of %d fields: %s", m, certificate.verdict)
    return certificate
