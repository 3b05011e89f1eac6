"""
Vectorised numerical evaluation.

Expressions are evaluated over whole batches of points at once. Points where
an operation leaves its domain (logarithm of a non-positive number, division
by a value below the guard, square root of a negative number, arccos outside
[-1, 1], or any non-finite result) are flagged in a mask rather than producing
NaN values.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction

import numpy as np

from ..config import DIVISION_GUARD
from ..errors import EvaluationDomainError, UnknownNameError
from .domain import Point
from .expr import Binary, Const, Expr, Param, Unary, Var, walk


class BatchEvaluator:
    """
    Evaluate expressions over a batch of points, sharing common subtrees.

    Args:
        env: Variable name to array of values (all of the same length)
        params: Parameter name to value
        guard: Smallest admissible divisor magnitude
    """

    def __init__(
        self,
        env: Mapping[str, np.ndarray],
        params: Mapping[str, float] | None = None,
        guard: float = DIVISION_GUARD,
    ):
        self.env = {k: np.asarray(v, dtype=float) for k, v in env.items()}
        self.params = dict(params or {})
        self.guard = guard
        sizes = {v.shape[0] for v in self.env.values()}
        if len(sizes) > 1:
            raise ValueError(f"Inconsistent batch sizes: {sorted(sizes)}")
        self.size = sizes.pop() if sizes else 1
        self.bad = np.zeros(self.size, dtype=bool)
        self._memo: dict[Expr, np.ndarray] = {}

    def __call__(self, e: Expr) -> np.ndarray:
        return self.value(e)

    def value(self, e: Expr) -> np.ndarray:
        cached = self._memo.get(e)
        if cached is not None:
            return cached
        with np.errstate(all="ignore"):
            result = self._compute(e)
        finite = np.isfinite(result)
        if not finite.all():
            self.bad |= ~finite
            result = np.where(finite, result, 0.0)
        self._memo[e] = result
        return result

    def values(self, exprs: Sequence[Expr]) -> np.ndarray:
        """Stack several expressions into an array of shape (len(exprs), N)."""
        if not exprs:
            return np.zeros((0, self.size))
        return np.stack([self.value(e) for e in exprs])

    def _flag(self, mask: np.ndarray) -> None:
        self.bad |= mask

    def _compute(self, e: Expr) -> np.ndarray:
        if isinstance(e, Const):
            return np.full(self.size, float(e.value))
        if isinstance(e, Var):
            if e.name not in self.env:
                raise UnknownNameError(e.name)
            return self.env[e.name]
        if isinstance(e, Param):
            if e.name not in self.params:
                raise UnknownNameError(e.name)
            return np.full(self.size, float(self.params[e.name]))
        if isinstance(e, Unary):
            return self._unary(e.op, self.value(e.arg))
        assert isinstance(e, Binary)
        left = self.value(e.left)
        if e.op == "pow":
            return self._power(left, e.right)
        right = self.value(e.right)
        if e.op == "add":
            return left + right
        if e.op == "sub":
            return left - right
        if e.op == "mul":
            return left * right
        small = np.abs(right) < self.guard
        self._flag(small)
        return left / np.where(small, 1.0, right)

    def _unary(self, op: str, a: np.ndarray) -> np.ndarray:
        if op == "neg":
            return -a
        if op == "sin":
            return np.sin(a)
        if op == "cos":
            return np.cos(a)
        if op == "tan":
            c = np.cos(a)
            small = np.abs(c) < self.guard
            self._flag(small)
            return np.sin(a) / np.where(small, 1.0, c)
        if op == "cot":
            s = np.sin(a)
            small = np.abs(s) < self.guard
            self._flag(small)
            return np.cos(a) / np.where(small, 1.0, s)
        if op == "ln":
            bad = a <= 0
            self._flag(bad)
            return np.log(np.where(bad, 1.0, a))
        if op == "exp":
            return np.exp(a)
        if op == "sqrt":
            bad = a < 0
            self._flag(bad)
            return np.sqrt(np.where(bad, 0.0, a))
        if op == "arccos":
            bad = np.abs(a) > 1
            self._flag(bad)
            return np.arccos(np.where(bad, 0.0, a))
        if op == "abs":
            return np.abs(a)
        raise ValueError(f"Unknown unary operator {op}")

    def _power(self, base: np.ndarray, exponent: Expr) -> np.ndarray:
        if isinstance(exponent, Const) and isinstance(exponent.value, Fraction) and exponent.value.denominator == 1:
            k = exponent.value.numerator
            if k < 0:
                small = np.abs(base) < self.guard
                self._flag(small)
                base = np.where(small, 1.0, base)
            return _int_power(base, k)
        expo = self.value(exponent)
        bad = base < 0
        small = np.abs(base) < self.guard
        self._flag(bad | (small & (expo < 0)))
        return np.where(bad, 0.0, base) ** expo


def _int_power(base: np.ndarray, k: int) -> np.ndarray:
    if k < 0:
        return 1.0 / np.power(base, -k)
    return np.power(base, k)


def evaluate(e: Expr, point: Point | Mapping[str, float], guard: float = DIVISION_GUARD) -> float:
    """
    Evaluate ``e`` at a single point.

    Raises:
        EvaluationDomainError: The point lies outside the domain of ``e``
        UnknownNameError: The point does not assign a name used by ``e``
    """
    if isinstance(point, Point):
        values, params = point.values, point.params
    else:
        values, params = point, {}
    evaluator = BatchEvaluator({k: np.array([v]) for k, v in values.items()}, params, guard)
    result = evaluator(e)
    if evaluator.bad[0]:
        raise EvaluationDomainError(
            f"Expression is undefined at {dict(values)}",
            error_code="domain",
            details={"point": {k: float(v) for k, v in values.items()}},
        )
    return float(result[0])


def term_scale(evaluator: BatchEvaluator, e: Expr) -> np.ndarray:
    """``1 + max |subterm|`` per point over every node of ``e``, the scale of scale-relative residuals."""
    scale = np.ones(evaluator.size)
    for node in set(walk(e)):
        scale = np.maximum(scale, 1.0 + np.abs(evaluator(node)))
    return scale
