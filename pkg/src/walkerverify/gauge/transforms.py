"""
Closed-form Walker coordinate transformations.

A transformation keeping the Walker form has the shape

    v_new = v + F(x, y, u),   x_new^i = x_new^i(x, y, u),   u_new = u + c

and is stored through its inverse: the old coordinates as expressions in the
new ones. New coordinates reuse the names v, x, y, u.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Literal, Optional

import numpy as np

from ..config import DIVISION_GUARD
from ..errors import EvaluationDomainError, PreconditionError
from ..exprcore import ONE, ZERO, BatchEvaluator, Expr, as_expr, differentiate, parse, substitute, to_text
from ..geometry import WALKER_COORDS, Chart, MetricTensor
from ..utils.logging import get_logger
from ..walker import LAMBDA_EXPR, EinsteinAnsatz, WalkerMetric

logger = get_logger(__name__)

Direction = Literal["inverse", "forward"]


@dataclass(frozen=True)
class ClosedFormTransform:
    """
    Coordinate change given by expressions.

    With ``direction="inverse"`` the expressions give the old (v, x, y, u) in
    terms of the new coordinates, which is what a pullback needs. A
    ``"forward"`` transform gives the new coordinates in terms of the old ones
    and can only map points.
    """

    expressions: tuple[Expr, Expr, Expr, Expr]
    direction: Direction = "inverse"
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if len(self.expressions) != 4:
            raise PreconditionError("A Walker transformation has four components")
        if self.direction not in ("inverse", "forward"):
            raise PreconditionError(f"Unknown direction '{self.direction}'")
        self.validate()

    @classmethod
    def from_text(
        cls,
        mapping: Mapping[str, str | float | Expr],
        direction: Direction = "inverse",
        label: str = "",
    ) -> ClosedFormTransform:
        """Build from a mapping of coordinate name to expression; missing names map to themselves."""
        unknown = set(mapping) - set(WALKER_COORDS)
        if unknown:
            raise PreconditionError(f"Unknown coordinates {sorted(unknown)}")
        exprs = []
        for name in WALKER_COORDS:
            item = mapping.get(name, name)
            exprs.append(parse(item, WALKER_COORDS) if isinstance(item, str) else as_expr(item))
        return cls(tuple(exprs), direction, label)  # type: ignore[arg-type]

    @classmethod
    def identity(cls) -> ClosedFormTransform:
        return cls.from_text({}, label="identity")

    def validate(self) -> None:
        """
        Check the Walker shape structurally.

        Raises:
            PreconditionError: The v component is not ``v + F`` with v-free F, the
                x or y component depends on v, or u is not shifted by a constant
        """
        v_expr, x_expr, y_expr, u_expr = self.expressions
        if differentiate(v_expr, "v") != ONE:
            raise PreconditionError(
                f"v component must be v plus a v-free function, got {to_text(v_expr)}",
                error_code="walker-shape",
            )
        for name, e in (("x", x_expr), ("y", y_expr)):
            if differentiate(e, "v") != ZERO:
                raise PreconditionError(f"{name} component must not depend on v", error_code="walker-shape")
        if differentiate(u_expr, "u") != ONE or any(
            differentiate(u_expr, c) != ZERO for c in ("v", "x", "y")
        ):
            raise PreconditionError(
                f"u component must be u plus a constant, got {to_text(u_expr)}",
                error_code="walker-shape",
            )

    @property
    def mapping(self) -> dict[str, Expr]:
        return dict(zip(WALKER_COORDS, self.expressions))

    @cached_property
    def jacobian(self) -> tuple[tuple[Expr, ...], ...]:
        """``J[c][a] = d Phi^c / d x_new^a``."""
        return tuple(
            tuple(differentiate(e, name) for name in WALKER_COORDS)
            for e in self.expressions
        )

    def map_points(
        self,
        env: Mapping[str, np.ndarray],
        params: Mapping[str, float],
        guard: float = DIVISION_GUARD,
    ) -> dict[str, np.ndarray]:
        """Images of a batch of points."""
        evaluator = BatchEvaluator(env, params, guard)
        out = {name: evaluator(e) for name, e in zip(WALKER_COORDS, self.expressions)}
        if evaluator.bad.any():
            raise EvaluationDomainError("Transformation is undefined on the sample", error_code="domain")
        return out

    def jacobian_values(
        self,
        env: Mapping[str, np.ndarray],
        params: Mapping[str, float],
        guard: float = DIVISION_GUARD,
    ) -> np.ndarray:
        """Numeric Jacobians of shape (N, 4, 4), indexed [N, c, a]."""
        evaluator = BatchEvaluator(env, params, guard)
        out = np.zeros((evaluator.size, 4, 4))
        for c, row in enumerate(self.jacobian):
            for a, e in enumerate(row):
                if e != ZERO:
                    out[:, c, a] = evaluator(e)
        if evaluator.bad.any():
            raise EvaluationDomainError("Jacobian is undefined on the sample", error_code="domain")
        return out


def pullback_metric(g: MetricTensor, t: ClosedFormTransform, label: str = "") -> MetricTensor:
    """
    Symbolic pullback ``g_new_ab = J^c_a J^d_b (g_cd o Phi)``.

    Raises:
        PreconditionError: ``t`` is a forward transform or ``g`` is not a 4-metric
    """
    if t.direction != "inverse":
        raise PreconditionError("Pullbacks need the old coordinates in terms of the new ones")
    if g.chart.coords != WALKER_COORDS:
        raise PreconditionError("Pullbacks act on metrics in Walker coordinates")
    mapping = t.mapping
    moved = [[substitute(g.components[c][d], mapping) for d in range(4)] for c in range(4)]
    J = t.jacobian
    rows: list[list[Expr]] = [[ZERO] * 4 for _ in range(4)]
    for a in range(4):
        for b in range(a, 4):
            total: Expr = ZERO
            for c in range(4):
                if J[c][a] == ZERO:
                    continue
                for d in range(4):
                    if J[d][b] == ZERO or moved[c][d] == ZERO:
                        continue
                    total = total + J[c][a] * moved[c][d] * J[d][b]
            rows[a][b] = rows[b][a] = total
    chart = Chart(WALKER_COORDS, g.chart.box, g.chart.params)
    return MetricTensor(chart, tuple(tuple(r) for r in rows), label or f"{g.label}*")


def _check_lambda(lam: float) -> None:
    if lam == 0:
        raise PreconditionError("Lambda must be nonzero for the v-shift", error_code="lambda")


def vshift_function(w: WalkerMetric, lam: float) -> Expr:
    """``F = H1 / (2 Lambda)``."""
    _check_lambda(lam)
    if w.ansatz is None:
        raise PreconditionError("H does not have the form Lambda v^2 + H1 v + H0", error_code="ansatz")
    return w.ansatz.H1 / (2 * LAMBDA_EXPR)


def vshift_remove_H1(w: WalkerMetric, lam: float) -> WalkerMetric:
    """
    Remove H1 by ``v = v_new - F`` with ``F = H1 / (2 Lambda)``.

    ``A_i`` becomes ``A_i - d_i F`` and ``H0`` becomes
    ``H0 - H1^2 / (4 Lambda) - 2 d_u F``.

    Args:
        w: Walker metric with the Einstein ansatz
        lam: Value of Lambda (must be nonzero)

    Returns:
        WalkerMetric with H1 = 0
    """
    F = vshift_function(w, lam)
    assert w.ansatz is not None
    if w.ansatz.H1 == ZERO:
        return w
    H1 = w.ansatz.H1
    A = (w.A[0] - differentiate(F, "x"), w.A[1] - differentiate(F, "y"))
    H0 = w.ansatz.H0 - H1 ** 2 / (4 * LAMBDA_EXPR) - 2 * differentiate(F, "u")
    logger.debug("v-shift removes H1 = %s", to_text(H1))
    return WalkerMetric.from_ansatz(w.h, A, EinsteinAnsatz(H0), w.box, w.label)


def closed_form_from_vshift(w: WalkerMetric, lam: float) -> ClosedFormTransform:
    """The v-shift as a transformation: ``v = v_new - F``, other coordinates fixed."""
    F = vshift_function(w, lam)
    return ClosedFormTransform.from_text({"v": parse("v", WALKER_COORDS) - F}, label="v-shift")


def transform_points(
    t: ClosedFormTransform,
    points: Sequence[Mapping[str, float]],
    params: Optional[Mapping[str, float]] = None,
) -> list[dict[str, float]]:
    """Images of individual points."""
    if not points:
        return []
    env = {name: np.array([p[name] for p in points], dtype=float) for name in WALKER_COORDS}
    images = t.map_points(env, dict(params or {}))
    return [{name: float(images[name][i]) for name in WALKER_COORDS} for i in range(len(points))]


__all__ = [
    "ClosedFormTransform",
    "pullback_metric",
    "vshift_function",
    "vshift_remove_H1",
    "closed_form_from_vshift",
    "transform_points",
]
