"""
Charts and symbolic metric tensors.

A metric stores its components as expressions and produces numeric jets
(values, first and second partial derivatives) over batches of points. The
derivatives are exact symbolic derivatives, built once per metric.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from ..config import DIVISION_GUARD
from ..errors import PreconditionError
from ..exprcore import ZERO, BatchEvaluator, DomainBox, Expr, Point, as_expr, differentiate, parse, to_text

# Walker coordinate order; index 3 is u.
WALKER_COORDS = ("v", "x", "y", "u")
SURFACE_COORDS = ("x", "y")
LAMBDA = "Lambda"


@dataclass(frozen=True)
class Chart:
    """Ordered coordinates, their sampling domain and the declared parameters."""

    coords: tuple[str, ...]
    """Coordinate names in index order"""

    box: DomainBox
    """Sampling domain over coordinates and extras"""

    params: tuple[str, ...] = (LAMBDA,)
    """Parameter names"""

    extras: tuple[str, ...] = ()
    """Variables the components depend on that are held fixed (e.g. u for surface families)"""

    def __post_init__(self) -> None:
        names = self.coords + self.extras
        if len(set(names)) != len(names):
            raise PreconditionError(f"Chart names must be unique: {names}")
        if len(self.coords) not in (2, 4):
            raise PreconditionError(f"Charts have 2 or 4 coordinates, got {len(self.coords)}")
        missing = [n for n in names if n not in self.box.names]
        if missing:
            raise PreconditionError(f"Domain box does not cover {missing}")

    @property
    def dimension(self) -> int:
        return len(self.coords)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.coords + self.extras

    def index(self, name: str) -> int:
        return self.coords.index(name)


@dataclass
class MetricJet:
    """Numeric metric values and derivatives over a batch of N points."""

    g: np.ndarray
    """Components, shape (N, n, n)"""

    dg: np.ndarray
    """First derivatives dg[N, c, a, b] = d_c g_ab"""

    ddg: Optional[np.ndarray]
    """Second derivatives ddg[N, c, d, a, b] = d_c d_d g_ab"""

    bad: np.ndarray
    """Mask of points where a component is undefined"""


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric matrix of component expressions on a chart."""

    chart: Chart
    components: tuple[tuple[Expr, ...], ...]
    label: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        n = self.chart.dimension
        if len(self.components) != n or any(len(row) != n for row in self.components):
            raise PreconditionError(f"Metric must be {n}x{n}")
        for a in range(n):
            for b in range(a + 1, n):
                if self.components[a][b] != self.components[b][a]:
                    raise PreconditionError(
                        f"Metric is not symmetric in ({self.chart.coords[a]}, {self.chart.coords[b]})"
                    )

    @classmethod
    def from_matrix(
        cls,
        chart: Chart,
        matrix: Sequence[Sequence[Expr | float | str]],
        label: str = "",
    ) -> MetricTensor:
        """Build from a nested sequence; strings are parsed over the chart names."""
        rows = []
        for row in matrix:
            built = []
            for item in row:
                if isinstance(item, str):
                    built.append(parse(item, chart.variables, chart.params))
                else:
                    built.append(as_expr(item))
            rows.append(tuple(built))
        return cls(chart, tuple(rows), label)

    @property
    def dimension(self) -> int:
        return self.chart.dimension

    def __getitem__(self, ab: tuple[int, int]) -> Expr:
        a, b = ab
        return self.components[a][b]

    def pairs(self) -> list[tuple[int, int]]:
        """Index pairs of the upper triangle."""
        n = self.dimension
        return [(a, b) for a in range(n) for b in range(a, n)]

    @cached_property
    def first_derivatives(self) -> dict[tuple[int, int, int], Expr]:
        """Map (c, a, b) with a <= b to d_c g_ab."""
        coords = self.chart.coords
        return {
            (c, a, b): differentiate(self.components[a][b], coords[c])
            for c in range(self.dimension)
            for a, b in self.pairs()
        }

    @cached_property
    def second_derivatives(self) -> dict[tuple[int, int, int, int], Expr]:
        """Map (c, d, a, b) with c <= d and a <= b to d_c d_d g_ab."""
        coords = self.chart.coords
        first = self.first_derivatives
        result = {}
        for c in range(self.dimension):
            for d in range(c, self.dimension):
                for a, b in self.pairs():
                    result[(c, d, a, b)] = differentiate(first[(d, a, b)], coords[c])
        return result

    def jet(
        self,
        env: Mapping[str, np.ndarray],
        params: Mapping[str, float],
        order: int = 2,
        guard: float = DIVISION_GUARD,
    ) -> MetricJet:
        """
        Evaluate components and derivatives over a batch.

        Args:
            env: Variable name to values
            params: Parameter values
            order: Highest derivative order (0, 1 or 2)
            guard: Division guard

        Returns:
            MetricJet with symmetric arrays
        """
        evaluator = BatchEvaluator(env, params, guard)
        n, size = self.dimension, evaluator.size
        g = np.zeros((size, n, n))
        for a, b in self.pairs():
            g[:, a, b] = g[:, b, a] = evaluator(self.components[a][b])
        dg = np.zeros((size, n, n, n))
        if order >= 1:
            for (c, a, b), e in self.first_derivatives.items():
                if e != ZERO:
                    dg[:, c, a, b] = dg[:, c, b, a] = evaluator(e)
        ddg = None
        if order >= 2:
            ddg = np.zeros((size, n, n, n, n))
            for (c, d, a, b), e in self.second_derivatives.items():
                if e == ZERO:
                    continue
                value = evaluator(e)
                ddg[:, c, d, a, b] = ddg[:, c, d, b, a] = value
                ddg[:, d, c, a, b] = ddg[:, d, c, b, a] = value
        return MetricJet(g, dg, ddg, evaluator.bad)

    def at(self, point: Point, guard: float = DIVISION_GUARD) -> np.ndarray:
        """Numeric components at a single point."""
        jet = self.jet({k: np.array([v]) for k, v in point.values.items()}, point.params, order=0, guard=guard)
        return jet.g[0]

    def to_text(self) -> list[list[str]]:
        return [[to_text(e) for e in row] for row in self.components]


def point_env(point: Point) -> dict[str, np.ndarray]:
    """Wrap a single point as a batch of one."""
    return {k: np.array([float(v)]) for k, v in point.values.items()}


def with_lambda(params: Optional[Mapping[str, float]], lam: float) -> dict[str, float]:
    """Parameter mapping with ``Lambda`` set to ``lam``."""
    merged = dict(params or {})
    merged[LAMBDA] = float(lam)
    return merged


def inverse_2x2(h: Sequence[Sequence[Expr]]) -> tuple[tuple[Expr, Expr], tuple[Expr, Expr]]:
    """Symbolic inverse of a symmetric 2x2 matrix of expressions."""
    (h11, h12), (_, h22) = h
    det = h11 * h22 - h12 * h12
    off = -(h12 / det)
    return ((h22 / det, off), (off, h11 / det))


def raise_index(h: Sequence[Sequence[Expr]], A: Sequence[Expr]) -> tuple[Expr, Expr]:
    """``A^i = h^{ij} A_j`` for a 2x2 metric."""
    inv = inverse_2x2(h)
    return (
        inv[0][0] * A[0] + inv[0][1] * A[1],
        inv[1][0] * A[0] + inv[1][1] * A[1],
    )
