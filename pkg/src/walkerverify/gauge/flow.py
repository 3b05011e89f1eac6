"""
The flow that removes A from a Walker metric.

Along ``dx^i/du = W^i(x, y, u)`` with ``W^i = -h^{ij} A_j`` the new
coordinates are the initial values at ``u0``. The Jacobian of the flow map is
integrated alongside through the variational equations ``dJ/du = (dW/dx) J``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np
from scipy.integrate import solve_ivp

from ..config import DIVISION_GUARD, IntegratorConfig
from ..errors import FlowIntegrationError
from ..exprcore import ZERO, BatchEvaluator, DomainBox, Expr, differentiate
from ..geometry import raise_index
from ..utils.logging import get_logger
from ..walker import WalkerMetric

logger = get_logger(__name__)

FLOW_COORDS = ("x", "y")


@dataclass(frozen=True)
class FlowTransform:
    """The vector field W with its base time and integrator settings."""

    W: tuple[Expr, Expr]
    """Components W^x, W^y in (x, y, u)"""

    u0: float = 0.0
    """Time at which the new coordinates agree with the old ones"""

    box: Optional[DomainBox] = None
    """Trajectories must stay inside the x and y intervals of this box"""

    integrator: IntegratorConfig = field(default_factory=IntegratorConfig)

    @cached_property
    def dW(self) -> tuple[tuple[Expr, Expr], tuple[Expr, Expr]]:
        """``dW[i][k] = d W^i / d x^k``."""
        return tuple(  # type: ignore[return-value]
            tuple(differentiate(w, c) for c in FLOW_COORDS) for w in self.W
        )

    def is_trivial(self) -> bool:
        return all(w == ZERO for w in self.W)

    def field_values(
        self,
        x: np.ndarray,
        y: np.ndarray,
        u: np.ndarray,
        params: Mapping[str, float],
        with_derivatives: bool = False,
        guard: float = DIVISION_GUARD,
    ) -> tuple[np.ndarray, Optional[np.ndarray]]:
        """
        W and optionally dW at a batch of points.

        Returns:
            W of shape (N, 2) and dW of shape (N, 2, 2) or None

        Raises:
            FlowIntegrationError: W is undefined at some point
        """
        evaluator = BatchEvaluator({"x": x, "y": y, "u": u}, params, guard)
        w = np.stack([evaluator(e) for e in self.W], axis=-1)
        dw = None
        if with_derivatives:
            dw = np.stack(
                [np.stack([evaluator(e) for e in row], axis=-1) for row in self.dW],
                axis=-2,
            )
        if evaluator.bad.any():
            index = int(np.argmax(evaluator.bad))
            raise FlowIntegrationError(
                "Flow field is undefined along the trajectory",
                error_code="domain-exit",
                details={"x": float(x[index]), "y": float(y[index]), "u": float(u[index])},
            )
        return w, dw


def flow_transform_for(
    w: WalkerMetric,
    u0: float = 0.0,
    integrator: Optional[IntegratorConfig] = None,
) -> FlowTransform:
    """The flow removing A from ``w``: ``W^i = -h^{ij} A_j``."""
    raised = raise_index(w.h, w.A)
    return FlowTransform((-raised[0], -raised[1]), u0, w.box, integrator or IntegratorConfig())


@dataclass
class FlowResult:
    """End points of a batch of trajectories."""

    x: np.ndarray
    y: np.ndarray
    u: np.ndarray
    jacobian: np.ndarray
    """``J[N, i, k] = d x^i(u) / d x_new^k``"""

    velocity: np.ndarray
    """W at the end points, shape (N, 2)"""


def _box_margin(box: Optional[DomainBox], x: np.ndarray, y: np.ndarray) -> float:
    if box is None:
        return 1.0
    margin = np.inf
    for name, values in (("x", x), ("y", y)):
        if name in box.names:
            lo, hi = box.interval(name)
            margin = min(margin, float((values - lo).min()), float((hi - values).min()))
    return margin


def integrate_flow(
    t: FlowTransform,
    x0: np.ndarray | float,
    y0: np.ndarray | float,
    u: np.ndarray | float,
    params: Optional[Mapping[str, float]] = None,
    u_start: Optional[float] = None,
) -> FlowResult:
    """
    Integrate a batch of trajectories from ``u_start`` (default ``t.u0``) to ``u``.

    Each point has its own end time; the system is integrated in a common
    variable s in [0, 1] with ``u = u_start + s (u_i - u_start)``.

    Args:
        t: Flow transform
        x0: Initial x (scalar or array)
        y0: Initial y
        u: Target times (scalar or array)
        params: Parameter values
        u_start: Initial time

    Returns:
        FlowResult

    Raises:
        FlowIntegrationError: A trajectory leaves the box or the integrator fails
    """
    params = dict(params or {})
    x0, y0, u_target = np.broadcast_arrays(
        np.atleast_1d(np.asarray(x0, dtype=float)),
        np.atleast_1d(np.asarray(y0, dtype=float)),
        np.atleast_1d(np.asarray(u, dtype=float)),
    )
    n = x0.shape[0]
    start = t.u0 if u_start is None else float(u_start)
    span = u_target - start
    identity = np.broadcast_to(np.eye(2), (n, 2, 2))

    if t.is_trivial():
        return FlowResult(x0.copy(), y0.copy(), u_target.copy(), identity.copy(), np.zeros((n, 2)))

    def unpack(state: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return state[:n], state[n:2 * n], state[2 * n:].reshape(n, 2, 2)

    def rhs(s: float, state: np.ndarray) -> np.ndarray:
        x, y, J = unpack(state)
        w, dw = t.field_values(x, y, start + s * span, params, with_derivatives=True)
        assert dw is not None
        dJ = np.einsum("nik,nkj->nij", dw, J)
        return np.concatenate([span * w[:, 0], span * w[:, 1], (span[:, None, None] * dJ).reshape(-1)])

    def leaves_box(s: float, state: np.ndarray) -> float:
        x, y, _ = unpack(state)
        return _box_margin(t.box, x, y)

    leaves_box.terminal = True  # type: ignore[attr-defined]
    leaves_box.direction = -1  # type: ignore[attr-defined]

    if _box_margin(t.box, x0, y0) < 0:
        raise FlowIntegrationError("Initial points lie outside the domain box", error_code="domain-exit")

    config = t.integrator
    options = {}
    if config.max_step:
        # max_step is given in u; the integration variable is s
        options["max_step"] = config.max_step / max(float(np.abs(span).max()), config.max_step)
    state0 = np.concatenate([x0, y0, identity.reshape(-1)])
    solution = solve_ivp(
        rhs,
        (0.0, 1.0),
        state0,
        method=config.method,
        rtol=config.rtol,
        atol=config.atol,
        events=leaves_box,
        **options,
    )
    if solution.status == 1:
        raise FlowIntegrationError(
            "Trajectory left the domain box",
            error_code="domain-exit",
            details={"s": float(solution.t[-1])},
        )
    if solution.status != 0:
        raise FlowIntegrationError(
            f"Flow integration failed: {solution.message}",
            error_code="integrator",
            details={"s": float(solution.t[-1])},
        )
    x, y, J = unpack(solution.y[:, -1])
    velocity, _ = t.field_values(x, y, u_target, params)
    logger.debug("Integrated %d trajectories in %d evaluations", n, solution.nfev)
    return FlowResult(x.copy(), y.copy(), u_target.copy(), J.copy(), velocity)


__all__ = [
    "FLOW_COORDS",
    "FlowTransform",
    "FlowResult",
    "flow_transform_for",
    "integrate_flow",
]
