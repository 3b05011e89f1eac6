"""
Vector fields, Lie derivatives of metrics and Killing one-forms.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import DEFAULT_SAMPLES, DEFAULT_SEED, DIVISION_GUARD
from ..errors import EvaluationDomainError
from ..exprcore import ZERO, BatchEvaluator, DomainBox, Expr, as_expr, differentiate, parse, to_text
from ..exprcore.sampling import batch_reject, point_at, sample_points
from ..geometry import WALKER_COORDS, MetricTensor, raise_index
from ..utils.helpers import relative_residual
from ..utils.logging import get_logger

logger = get_logger(__name__)

DEFAULT_KILLING_TOL = 1e-9


@dataclass(frozen=True)
class VectorField:
    """Components of a vector field in a coordinate basis."""

    components: tuple[Expr, ...]
    coords: tuple[str, ...] = WALKER_COORDS
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.components) != len(self.coords):
            raise ValueError(
                f"Vector field has {len(self.components)} components for {len(self.coords)} coordinates"
            )

    @classmethod
    def from_text(
        cls,
        components: Sequence[str | float | Expr],
        coords: tuple[str, ...] = WALKER_COORDS,
        label: str = "",
    ) -> VectorField:
        built = tuple(
            parse(c, coords + ("u",) if "u" not in coords else coords) if isinstance(c, str) else as_expr(c)
            for c in components
        )
        return cls(built, coords, label)

    @classmethod
    def zero(cls, coords: tuple[str, ...] = WALKER_COORDS) -> VectorField:
        return cls(tuple(ZERO for _ in coords), coords)

    def is_zero(self) -> bool:
        return all(c == ZERO for c in self.components)

    def __add__(self, other: VectorField) -> VectorField:
        return VectorField(tuple(a + b for a, b in zip(self.components, other.components)), self.coords)

    def scaled(self, factor: float) -> VectorField:
        return VectorField(tuple(as_expr(factor) * c for c in self.components), self.coords)

    def describe(self) -> str:
        """Readable ``a*d_v + b*d_x`` form."""
        parts = [
            f"({to_text(c)})*d_{name}"
            for c, name in zip(self.components, self.coords)
            if c != ZERO
        ]
        return " + ".join(parts) if parts else "0"


def lie_bracket(k1: VectorField, k2: VectorField) -> VectorField:
    """``[K1, K2]^a = K1^b d_b K2^a - K2^b d_b K1^a``."""
    if k1.coords != k2.coords:
        raise ValueError("Vector fields live on different charts")
    coords = k1.coords
    components = []
    for a in range(len(coords)):
        total: Expr = ZERO
        for b, name in enumerate(coords):
            total = total + k1.components[b] * differentiate(k2.components[a], name)
            total = total - k2.components[b] * differentiate(k1.components[a], name)
        components.append(total)
    return VectorField(tuple(components), coords, f"[{k1.label},{k2.label}]")


def field_values(
    fields: Sequence[VectorField],
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
    guard: float = DIVISION_GUARD,
) -> np.ndarray:
    """Values of several fields, shape (len(fields), N, dim)."""
    evaluator = BatchEvaluator(env, params, guard)
    values = np.stack([np.stack([evaluator(c) for c in f.components], axis=-1) for f in fields])
    if evaluator.bad.any():
        raise EvaluationDomainError("Vector field is undefined on the sample", error_code="domain")
    return values


def lie_derivative_terms(
    metric: MetricTensor,
    vector: VectorField,
    env: Mapping[str, np.ndarray],
    params: Mapping[str, float],
    guard: float = DIVISION_GUARD,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    The three terms of ``(L_K g)_ab = K^c d_c g_ab + g_cb d_a K^c + g_ac d_b K^c``.

    Each has shape (N, n, n).
    """
    if vector.coords != metric.chart.coords:
        raise ValueError("Vector field and metric use different coordinates")
    jet = metric.jet(env, params, order=1, guard=guard)
    evaluator = BatchEvaluator(env, params, guard)
    coords = metric.chart.coords
    n, size = len(coords), jet.g.shape[0]
    k = np.zeros((size, n))
    dk = np.zeros((size, n, n))  # dk[N, a, c] = d_a K^c
    for c, comp in enumerate(vector.components):
        if comp == ZERO:
            continue
        k[:, c] = evaluator(comp)
        for a, name in enumerate(coords):
            d = differentiate(comp, name)
            if d != ZERO:
                dk[:, a, c] = evaluator(d)
    if (jet.bad | evaluator.bad).any():
        raise EvaluationDomainError("Lie derivative is undefined on the sample", error_code="domain")
    transport = np.einsum("nc,ncab->nab", k, jet.dg)
    left = np.einsum("ncb,nac->nab", jet.g, dk)
    right = np.einsum("nab->nba", left)
    return transport, left, right


@dataclass
class KillingResidual:
    """Largest scale-relative Lie derivative over a sample."""

    value: float
    samples: int
    witness: Optional[dict[str, float]] = None

    def passed(self, tol: float = DEFAULT_KILLING_TOL) -> bool:
        return self.value < tol


def killing_residual(
    metric: MetricTensor,
    vector: VectorField,
    box: Optional[DomainBox] = None,
    n: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
) -> KillingResidual:
    """
    Maximum over sampled points and index pairs of ``|(L_K g)_ab| / scale``.

    Args:
        metric: Metric (4-dimensional or a surface family)
        vector: Candidate Killing field in the metric's coordinates
        box: Sampling domain (defaults to the chart's)
        n: Number of points
        seed: Base seed
        params: Parameter values

    Returns:
        KillingResidual with the worst point
    """
    params = dict(params or {})
    if vector.is_zero():
        return KillingResidual(0.0, n)
    box = box or metric.chart.box
    exprs = [metric.components[a][b] for a, b in metric.pairs()] + list(vector.components)
    env = sample_points(box, n, seed, params, batch_reject(exprs, params))
    transport, left, right = lie_derivative_terms(metric, vector, env, params)
    residual = relative_residual(transport + left + right, transport, left, right)
    worst = int(np.argmax(residual))
    return KillingResidual(float(residual[worst]), n, point_at(env, worst).as_dict())


@dataclass
class KillingFormResult:
    """Outcome of a Killing one-form check."""

    passed: bool
    residual: float
    vector: VectorField

    def __bool__(self) -> bool:
        return self.passed


def killing_oneform_check(
    h: MetricTensor,
    A: Sequence[Expr],
    box: Optional[DomainBox] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    params: Optional[Mapping[str, float]] = None,
    tol: float = DEFAULT_KILLING_TOL,
) -> KillingFormResult:
    """
    Check whether ``A`` is a Killing form of the surface metric ``h``.

    The dual field ``A^i = h^{ij} A_j`` is tested with u held fixed at each
    sampled point.
    """
    vector = VectorField(raise_index(h.components, A), h.chart.coords, "A#")
    residual = killing_residual(h, vector, box, n, seed, params)
    logger.debug("Killing form residual %.3e", residual.value)
    return KillingFormResult(residual.value < tol, residual.value, vector)
