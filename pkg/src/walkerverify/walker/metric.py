"""
Walker metrics ``g = 2 dv du + h + 2 A du + H du^2``.

The data (h, A, H) is kept separate from the assembled 4x4 metric so that the
reductions and gauge transformations can work on the pieces.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field, replace
from typing import Literal, Optional

import numpy as np

from ..config import DEFAULT_SEED
from ..errors import PreconditionError
from ..exprcore import (
    ONE,
    ZERO,
    BatchEvaluator,
    Binary,
    DomainBox,
    Expr,
    Param,
    Unary,
    as_expr,
    differentiate,
    free_names,
    parse,
    var,
)
from ..exprcore.sampling import batch_reject, sample_points
from ..geometry import LAMBDA, SURFACE_COORDS, WALKER_COORDS, Chart, MetricTensor
from ..utils.logging import get_logger

logger = get_logger(__name__)

Signature = Literal["sphere", "hyperbolic"]

SURFACE_NAMES = ("x", "y", "u")
V = var("v")
U = var("u")
LAMBDA_EXPR = Param(LAMBDA)

ExprMatrix = tuple[tuple[Expr, Expr], tuple[Expr, Expr]]


@dataclass(frozen=True)
class EinsteinAnsatz:
    """``H = Lambda v^2 + H1 v + H0`` with v-independent H0 and H1."""

    H0: Expr
    H1: Expr = ZERO

    def __post_init__(self) -> None:
        for name, e in (("H0", self.H0), ("H1", self.H1)):
            if "v" in free_names(e)[0]:
                raise PreconditionError(f"{name} must not depend on v")

    @property
    def H(self) -> Expr:
        return LAMBDA_EXPR * V ** 2 + self.H1 * V + self.H0

    @classmethod
    def split(cls, H: Expr) -> Optional[EinsteinAnsatz]:
        """
        Recover (H0, H1) from a full H when ``H - Lambda v^2`` is affine in v.

        Returns None when H does not have the ansatz form.
        """
        quadratic = LAMBDA_EXPR * V ** 2
        seen_quadratic = False
        H0: Expr = ZERO
        H1: Expr = ZERO
        for sign, term in _signed_terms(H):
            if term == quadratic and sign > 0 and not seen_quadratic:
                seen_quadratic = True
                continue
            if "v" not in free_names(term)[0]:
                H0 = H0 + term if sign > 0 else H0 - term
                continue
            coefficient = _linear_coefficient(term)
            if coefficient is None:
                return None
            H1 = H1 + coefficient if sign > 0 else H1 - coefficient
        if not seen_quadratic:
            return None
        return cls(H0, H1)


def _component(e: Expr | float | str) -> Expr:
    return parse(e, WALKER_COORDS) if isinstance(e, str) else as_expr(e)


def _matrix(h: Sequence[Sequence[Expr | float | str]]) -> ExprMatrix:
    rows = [[_component(e) for e in row] for row in h]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise PreconditionError("h must be a 2x2 matrix")
    return ((rows[0][0], rows[0][1]), (rows[1][0], rows[1][1]))


@dataclass(frozen=True)
class WalkerMetric:
    """
    The (h, A, H) data of a Walker metric.

    ``h`` and ``A`` depend on (x, y, u); ``H`` on (v, x, y, u). The domain box
    covers all four coordinates.
    """

    h: ExprMatrix
    A: tuple[Expr, Expr]
    H: Expr
    box: DomainBox
    ansatz: Optional[EinsteinAnsatz] = None
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.h[0][1] != self.h[1][0]:
            raise PreconditionError("h must be symmetric")
        for e in (*self.h[0], self.h[1][1], *self.A):
            if "v" in free_names(e)[0]:
                raise PreconditionError("h and A must not depend on v")

    @classmethod
    def build(
        cls,
        h: Sequence[Sequence[Expr | float | str]],
        A: Sequence[Expr | float | str],
        box: DomainBox,
        H: Expr | str | None = None,
        H0: Expr | str | None = None,
        H1: Expr | str | float = 0,
        label: str = "",
    ) -> WalkerMetric:
        """
        Build from expressions or expression text.

        Give either ``H`` or the ansatz pieces ``H0`` (and optionally ``H1``).
        """
        hm = _matrix(h)
        a = tuple(_component(e) for e in A)
        if len(a) != 2:
            raise PreconditionError("A must have two components")
        if H is not None:
            H_expr = parse(H, WALKER_COORDS) if isinstance(H, str) else H
            return cls(hm, (a[0], a[1]), H_expr, box, EinsteinAnsatz.split(H_expr), label)
        if H0 is None:
            raise PreconditionError("Either H or H0 is required")
        ansatz = EinsteinAnsatz(_component(H0), _component(H1))
        return cls(hm, (a[0], a[1]), ansatz.H, box, ansatz, label)

    @classmethod
    def from_ansatz(
        cls,
        h: ExprMatrix,
        A: tuple[Expr, Expr],
        ansatz: EinsteinAnsatz,
        box: DomainBox,
        label: str = "",
    ) -> WalkerMetric:
        return cls(h, A, ansatz.H, box, ansatz, label)

    @property
    def has_A(self) -> bool:
        return any(a != ZERO for a in self.A)

    @property
    def H0(self) -> Optional[Expr]:
        return self.ansatz.H0 if self.ansatz else None

    @property
    def H1(self) -> Optional[Expr]:
        return self.ansatz.H1 if self.ansatz else None

    def with_label(self, label: str) -> WalkerMetric:
        return replace(self, label=label)

    def surface(self) -> MetricTensor:
        """The family h(u) as a 2-dimensional metric with u held fixed."""
        chart = Chart(SURFACE_COORDS, self.box, (LAMBDA,), extras=("u",))
        return MetricTensor(chart, self.h, self.label + ":h" if self.label else "h")

    def h_dot(self, order: int = 1) -> ExprMatrix:
        """u-derivatives of h."""
        result = self.h
        for _ in range(order):
            result = tuple(tuple(differentiate(e, "u") for e in row) for row in result)  # type: ignore[assignment]
        return result

    def is_positive_definite(
        self,
        params: Mapping[str, float],
        n: int = 200,
        seed: int = DEFAULT_SEED,
    ) -> bool:
        """Sampled check that h is positive definite on the box."""
        exprs = [self.h[0][0], self.h[0][1], self.h[1][1]]
        env = sample_points(self.box, n, seed, params, batch_reject(exprs, params))
        evaluator = BatchEvaluator(env, params)
        h11, h12, h22 = (evaluator(e) for e in exprs)
        return bool(np.all(h11 > 0) and np.all(h11 * h22 - h12 ** 2 > 0))


def assemble(w: WalkerMetric) -> MetricTensor:
    """
    The 4x4 metric in coordinate order (v, x, y, u).

    g_vu = 1, g_ij = h_ij, g_iu = A_i, g_uu = H, every other entry 0.
    """
    (h11, h12), (_, h22) = w.h
    a1, a2 = w.A
    rows = (
        (ZERO, ZERO, ZERO, ONE),
        (ZERO, h11, h12, a1),
        (ZERO, h12, h22, a2),
        (ONE, a1, a2, w.H),
    )
    chart = Chart(WALKER_COORDS, w.box, (LAMBDA,))
    return MetricTensor(chart, rows, w.label)



def _signed_terms(e: Expr) -> list[tuple[int, Expr]]:
    """Top-level summands with their signs."""
    out: list[tuple[int, Expr]] = []
    stack = [(1, e)]
    while stack:
        sign, node = stack.pop()
        if isinstance(node, Binary) and node.op == "add":
            stack.extend(((sign, node.right), (sign, node.left)))
        elif isinstance(node, Binary) and node.op == "sub":
            stack.extend(((-sign, node.right), (sign, node.left)))
        elif isinstance(node, Unary) and node.op == "neg":
            stack.append((-sign, node.arg))
        else:
            out.append((sign, node))
    return out


def _linear_coefficient(term: Expr) -> Optional[Expr]:
    """X for a product ``X * v`` or ``v * X`` with v-free X, else None."""
    if term == V:
        return ONE
    if isinstance(term, Binary) and term.op == "mul":
        for factor, other in ((term.right, term.left), (term.left, term.right)):
            if factor == V and "v" not in free_names(other)[0]:
                return other
    return None
