"""
Exact differentiation and substitution of expressions.

Both walk the tree once per call, sharing results for repeated subtrees.
"""

from __future__ import annotations

from collections.abc import Mapping
from functools import singledispatch

from .expr import (
    ONE,
    TWO,
    ZERO,
    Binary,
    Const,
    Expr,
    Param,
    Unary,
    Var,
    add,
    cos,
    depends_on,
    div,
    free_names,
    func,
    ln,
    mul,
    neg,
    power,
    sin,
    sqrt,
    sub,
)


def differentiate(e: Expr, name: str) -> Expr:
    """
    Differentiate ``e`` with respect to the variable ``name``.

    Parameters and constants differentiate to zero. The result is built with
    the folding constructors, so terms independent of ``name`` disappear.

    Args:
        e: Expression to differentiate
        name: Variable name

    Returns:
        Exact derivative
    """
    memo: dict[int, Expr] = {}
    if name not in free_names(e)[0]:
        return ZERO
    return _diff(e, name, memo)


def _diff(e: Expr, name: str, memo: dict[int, Expr]) -> Expr:
    key = id(e)
    if key in memo:
        return memo[key]
    result = _derivative(e, name, memo)
    memo[key] = result
    return result


@singledispatch
def _derivative(e: Expr, name: str, memo: dict[int, Expr]) -> Expr:
    raise NotImplementedError(f"Cannot differentiate {type(e).__name__}")


@_derivative.register(Const)
@_derivative.register(Param)
def _(e: Expr, name: str, memo: dict[int, Expr]) -> Expr:
    return ZERO


@_derivative.register(Var)
def _(e: Var, name: str, memo: dict[int, Expr]) -> Expr:
    return ONE if e.name == name else ZERO


@_derivative.register(Unary)
def _(e: Unary, name: str, memo: dict[int, Expr]) -> Expr:
    a = e.arg
    da = _diff(a, name, memo)
    if da == ZERO:
        return ZERO
    op = e.op
    if op == "neg":
        return neg(da)
    if op == "sin":
        return mul(cos(a), da)
    if op == "cos":
        return neg(mul(sin(a), da))
    if op == "tan":
        return div(da, power(cos(a), TWO))
    if op == "cot":
        return neg(div(da, power(sin(a), TWO)))
    if op == "ln":
        return div(da, a)
    if op == "exp":
        return mul(e, da)
    if op == "sqrt":
        return div(da, mul(TWO, e))
    if op == "arccos":
        return neg(div(da, sqrt(sub(ONE, power(a, TWO)))))
    if op == "abs":
        return mul(div(a, e), da)
    raise NotImplementedError(f"Unknown unary operator {op}")


@_derivative.register(Binary)
def _(e: Binary, name: str, memo: dict[int, Expr]) -> Expr:
    a, b = e.left, e.right
    op = e.op
    if op == "pow":
        return _power_rule(e, name, memo)
    da = _diff(a, name, memo)
    db = _diff(b, name, memo)
    if op == "add":
        return add(da, db)
    if op == "sub":
        return sub(da, db)
    if op == "mul":
        return add(mul(da, b), mul(a, db))
    # quotient rule
    if db == ZERO:
        return div(da, b)
    return div(sub(mul(da, b), mul(a, db)), power(b, TWO))


def _power_rule(e: Binary, name: str, memo: dict[int, Expr]) -> Expr:
    a, b = e.left, e.right
    if not depends_on(b, name):
        da = _diff(a, name, memo)
        if da == ZERO:
            return ZERO
        return mul(mul(b, power(a, sub(b, ONE))), da)
    db = _diff(b, name, memo)
    if not depends_on(a, name):
        return mul(mul(e, ln(a)), db)
    da = _diff(a, name, memo)
    return mul(e, add(mul(db, ln(a)), div(mul(b, da), a)))


def gradient(e: Expr, names: tuple[str, ...] | list[str]) -> list[Expr]:
    """Partial derivatives of ``e`` in the order of ``names``."""
    return [differentiate(e, n) for n in names]


def substitute(e: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """
    Replace variables by expressions.

    Args:
        e: Expression
        mapping: Variable name to replacement

    Returns:
        Expression with every mapped variable replaced, rebuilt through the
        folding constructors
    """
    memo: dict[int, Expr] = {}

    def visit(node: Expr) -> Expr:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Var):
            result = mapping.get(node.name, node)
        elif isinstance(node, Unary):
            arg = visit(node.arg)
            if arg is node.arg:
                result = node
            elif node.op == "neg":
                result = neg(arg)
            else:
                result = func(node.op, arg)
        elif isinstance(node, Binary):
            left, right = visit(node.left), visit(node.right)
            if left is node.left and right is node.right:
                result = node
            else:
                result = _rebuild(node.op, left, right)
        else:
            result = node
        memo[key] = result
        return result

    return visit(e)


def substitute_params(e: Expr, values: Mapping[str, float]) -> Expr:
    """Replace parameters by constants."""
    memo: dict[int, Expr] = {}

    def visit(node: Expr) -> Expr:
        key = id(node)
        if key in memo:
            return memo[key]
        if isinstance(node, Param) and node.name in values:
            result: Expr = Const(values[node.name])
        elif isinstance(node, Unary):
            arg = visit(node.arg)
            result = node if arg is node.arg else (neg(arg) if node.op == "neg" else func(node.op, arg))
        elif isinstance(node, Binary):
            left, right = visit(node.left), visit(node.right)
            if left is node.left and right is node.right:
                result = node
            else:
                result = _rebuild(node.op, left, right)
        else:
            result = node
        memo[key] = result
        return result

    return visit(e)


def _rebuild(op: str, left: Expr, right: Expr) -> Expr:
    if op == "add":
        return add(left, right)
    if op == "sub":
        return sub(left, right)
    if op == "mul":
        return mul(left, right)
    if op == "div":
        return div(left, right)
    return power(left, right)


__all__ = [
    "differentiate",
    "gradient",
    "substitute",
    "substitute_params",
]
