"""
Bivector identities of the curvature and Weyl operators in the null frame.

A bivector acts as the endomorphism ``(a ^ b)(z) = g(a, z) b - g(b, z) a``
and ``R(a, b)`` as ``z -> R(a, b) z``. In this convention the curvature of a
constant-curvature plane is ``-Lambda X ^ Y``, so every identity carries the
identification sign ``WEDGE_SIGN`` in front of its Lambda terms, and the
endomorphism entering through the bivectors is ``WEDGE_SIGN * T``.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..config import ToleranceConfig
from ..exprcore import Point
from ..geometry import point_env
from ..walker import WalkerMetric
from .frame import E_INDICES, U, V, T_batch

WEDGE_SIGN = -1

# Coefficients of p^q, p^X, X^Y and X^q in the Weyl operator.
WEYL_COEFFICIENTS = (2.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0, -1.0 / 3.0)
PRINTED_WEYL_COEFFICIENTS = (1.0 / 3.0, -2.0 / 3.0, 1.0 / 3.0, -2.0 / 3.0)

IDENTITY_NAMES = (
    "R(p,q)",
    "R(X,Y)",
    "R(X,q)",
    "R(p,X)",
    "W(p,q)",
    "W(p,X)",
    "W(X,Y)",
    "W(X,q)",
)


def wedge(g: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Endomorphism matrices ``M[n, l, k]`` of ``a ^ b`` over a batch."""
    ga = np.einsum("nkm,nm->nk", g, a)
    gb = np.einsum("nkm,nm->nk", g, b)
    return np.einsum("nl,nk->nlk", b, ga) - np.einsum("nl,nk->nlk", a, gb)


def operator(tensor: np.ndarray, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``M[n, l, k] = tensor[n, l, k, i, j] a^i b^j``."""
    return np.einsum("nlkij,ni,nj->nlk", tensor, a, b)


def _residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    n = lhs.shape[0]
    scale = 1.0 + np.maximum(np.abs(lhs).reshape(n, -1).max(axis=1), np.abs(rhs).reshape(n, -1).max(axis=1))
    return float((np.abs(lhs - rhs).reshape(n, -1).max(axis=1) / scale).max())


@dataclass
class IdentityReport:
    """Largest scale-relative residual per identity."""

    residuals: dict[str, float]
    printed: dict[str, float] = field(default_factory=dict)
    """Residuals of the Weyl identities with the alternative printed coefficients"""

    def maximum(self) -> float:
        return max(self.residuals.values())

    def passed(self, tol: float = 1e-8) -> bool:
        return self.maximum() < tol


def identity_residuals(
    w: WalkerMetric,
    lam: float,
    env: Mapping[str, np.ndarray],
    params: Optional[Mapping[str, float]] = None,
    tolerance: Optional[ToleranceConfig] = None,
) -> IdentityReport:
    """
    Residuals of the eight frame identities over a batch.

    X and Y range over d_x and d_y.
    """
    t = T_batch(w, lam, env, params, tolerance)
    batch = t.curvature
    n, g = batch.size, batch.g
    riemann = batch.riemann
    weyl = np.einsum("nlm,nmkij->nlkij", batch.g_inv, batch.weyl)

    p = np.zeros((n, 4))
    p[:, V] = 1.0
    q = np.zeros((n, 4))
    q[:, V] = -0.5 * g[:, U, U]
    q[:, U] = 1.0
    E = []
    for index in E_INDICES:
        e = np.zeros((n, 4))
        e[:, index] = 1.0
        E.append(e)

    def t_of(i: int) -> np.ndarray:
        # T(d_i) as a 4-vector
        out = np.zeros((n, 4))
        out[:, list(E_INDICES)] = t.T[:, i, :]
        return out

    s = float(WEDGE_SIGN)

    def weyl_checks(c: tuple[float, float, float, float]) -> dict[str, float]:
        c_pq, c_pX, c_XY, c_Xq = c
        checks: dict[str, list[tuple[np.ndarray, np.ndarray]]] = {
            "W(p,q)": [(operator(weyl, p, q), s * c_pq * lam * wedge(g, p, q))],
            "W(p,X)": [(operator(weyl, p, X), s * c_pX * lam * wedge(g, p, X)) for X in E],
            "W(X,Y)": [(operator(weyl, E[0], E[1]), s * c_XY * lam * wedge(g, E[0], E[1]))],
            "W(X,q)": [
                (
                    operator(weyl, X, q),
                    s * (c_Xq * lam * wedge(g, X, q) - wedge(g, p, s * t_of(i))),
                )
                for i, X in enumerate(E)
            ],
        }
        return {name: max(_residual(a, b) for a, b in pairs) for name, pairs in checks.items()}

    zero = np.zeros((n, 4, 4))
    curvature_checks: dict[str, list[tuple[np.ndarray, np.ndarray]]] = {
        "R(p,q)": [(operator(riemann, p, q), s * lam * wedge(g, p, q))],
        "R(X,Y)": [(operator(riemann, E[0], E[1]), s * lam * wedge(g, E[0], E[1]))],
        "R(X,q)": [
            (operator(riemann, X, q), -s * wedge(g, p, s * t_of(i)))
            for i, X in enumerate(E)
        ],
        "R(p,X)": [(operator(riemann, p, X), zero) for X in E],
    }
    residuals = {name: max(_residual(a, b) for a, b in pairs) for name, pairs in curvature_checks.items()}
    residuals.update(weyl_checks(WEYL_COEFFICIENTS))
    return IdentityReport(residuals, weyl_checks(PRINTED_WEYL_COEFFICIENTS))


def weyl_identity_suite(
    w: WalkerMetric,
    lam: float,
    point: Point,
    tolerance: Optional[ToleranceConfig] = None,
) -> IdentityReport:
    """The eight identities at a single point."""
    return identity_residuals(w, lam, point_env(point), point.params, tolerance)


__all__ = [
    "WEDGE_SIGN",
    "WEYL_COEFFICIENTS",
    "PRINTED_WEYL_COEFFICIENTS",
    "IDENTITY_NAMES",
    "IdentityReport",
    "wedge",
    "operator",
    "identity_residuals",
    "weyl_identity_suite",
]
