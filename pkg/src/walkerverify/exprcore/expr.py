"""
Immutable symbolic scalar expressions.

Nodes are constants (exact ``Fraction`` or float), variables, parameters,
unary functions and binary operators. Smart constructors fold constants and
drop identities (``x + 0``, ``x * 1``, ``x * 0``, ``0 / x``); nothing else is
simplified.
"""

from __future__ import annotations

from collections.abc import Iterator
from fractions import Fraction
from typing import Union

Number = Union[int, float, Fraction]

UNARY_OPS = ("neg", "sin", "cos", "tan", "cot", "ln", "exp", "sqrt", "arccos", "abs")
FUNCTIONS = UNARY_OPS[1:]
BINARY_OPS = ("add", "sub", "mul", "div", "pow")

_SYMBOLS = {"add": "+", "sub": "-", "mul": "*", "div": "/"}

# Printing precedence: sums < products < negation < powers < atoms.
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


class Expr:
    """Base class of expression nodes."""

    __slots__ = ("_hash",)

    def _key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if type(self) is not type(other):
            return False
        assert isinstance(other, Expr)
        return hash(self) == hash(other) and self._key() == other._key()

    def __hash__(self) -> int:
        try:
            return self._hash  # type: ignore[no-any-return]
        except AttributeError:
            h = hash((type(self).__name__, self._key()))
            object.__setattr__(self, "_hash", h)
            return h

    def __setattr__(self, name: str, value: object) -> None:
        raise AttributeError(f"{type(self).__name__} is immutable")

    def children(self) -> tuple[Expr, ...]:
        return ()

    def __repr__(self) -> str:
        return f"{type(self).__name__}{self._key()!r}"

    def __str__(self) -> str:
        return to_text(self)

    # Arithmetic builds folded nodes.
    def __add__(self, other: ExprLike) -> Expr:
        return add(self, as_expr(other))

    def __radd__(self, other: ExprLike) -> Expr:
        return add(as_expr(other), self)

    def __sub__(self, other: ExprLike) -> Expr:
        return sub(self, as_expr(other))

    def __rsub__(self, other: ExprLike) -> Expr:
        return sub(as_expr(other), self)

    def __mul__(self, other: ExprLike) -> Expr:
        return mul(self, as_expr(other))

    def __rmul__(self, other: ExprLike) -> Expr:
        return mul(as_expr(other), self)

    def __truediv__(self, other: ExprLike) -> Expr:
        return div(self, as_expr(other))

    def __rtruediv__(self, other: ExprLike) -> Expr:
        return div(as_expr(other), self)

    def __pow__(self, other: ExprLike) -> Expr:
        return power(self, as_expr(other))

    def __neg__(self) -> Expr:
        return neg(self)


class Const(Expr):
    """Exact rational or floating point constant."""

    __slots__ = ("value",)

    def __init__(self, value: Number):
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            value = Fraction(value)
        object.__setattr__(self, "value", value)

    def _key(self) -> tuple:
        return (self.value,)

    @property
    def is_exact(self) -> bool:
        return isinstance(self.value, Fraction)

    def __float__(self) -> float:
        return float(self.value)


class Var(Expr):
    """Named real variable (a chart coordinate)."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self) -> tuple:
        return (self.name,)


class Param(Expr):
    """Named real parameter such as ``Lambda``; constant under differentiation."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        object.__setattr__(self, "name", name)

    def _key(self) -> tuple:
        return (self.name,)


class Unary(Expr):
    """Negation or elementary function applied to one argument."""

    __slots__ = ("op", "arg")

    def __init__(self, op: str, arg: Expr):
        if op not in UNARY_OPS:
            raise ValueError(f"Unknown unary operator: {op}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "arg", arg)

    def _key(self) -> tuple:
        return (self.op, self.arg)

    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)


class Binary(Expr):
    """Binary arithmetic node."""

    __slots__ = ("op", "left", "right")

    def __init__(self, op: str, left: Expr, right: Expr):
        if op not in BINARY_OPS:
            raise ValueError(f"Unknown binary operator: {op}")
        object.__setattr__(self, "op", op)
        object.__setattr__(self, "left", left)
        object.__setattr__(self, "right", right)

    def _key(self) -> tuple:
        return (self.op, self.left, self.right)

    def children(self) -> tuple[Expr, ...]:
        return (self.left, self.right)


ExprLike = Union[Expr, Number]

ZERO = Const(0)
ONE = Const(1)
TWO = Const(2)
HALF = Const(Fraction(1, 2))


def as_expr(value: ExprLike) -> Expr:
    """Coerce numbers to constants."""
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, float, Fraction)):
        return Const(value)
    raise TypeError(f"Cannot convert {type(value).__name__} to an expression")


def const(value: Number) -> Const:
    return Const(value)


def var(name: str) -> Var:
    return Var(name)


def param(name: str) -> Param:
    return Param(name)


def _is_const(e: Expr, value: Number | None = None) -> bool:
    if not isinstance(e, Const):
        return False
    return value is None or e.value == value


def _combine(a: Const, b: Const, op: str) -> Const:
    x, y = a.value, b.value
    if op == "add":
        return Const(x + y)
    if op == "sub":
        return Const(x - y)
    if op == "mul":
        return Const(x * y)
    return Const(x / y)


def add(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0):
        return b
    if _is_const(b, 0):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return _combine(a, b, "add")
    return Binary("add", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return a
    if _is_const(a, 0):
        return neg(b)
    if isinstance(a, Const) and isinstance(b, Const):
        return _combine(a, b, "sub")
    return Binary("sub", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_const(a, 0) or _is_const(b, 0):
        return ZERO
    if _is_const(a, 1):
        return b
    if _is_const(b, 1):
        return a
    if _is_const(a, -1):
        return neg(b)
    if _is_const(b, -1):
        return neg(a)
    if isinstance(a, Const) and isinstance(b, Const):
        return _combine(a, b, "mul")
    return Binary("mul", a, b)


def div(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        raise ZeroDivisionError("Division by the constant zero")
    if _is_const(a, 0):
        return ZERO
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const):
        return _combine(a, b, "div")
    return Binary("div", a, b)


def power(a: Expr, b: Expr) -> Expr:
    if _is_const(b, 0):
        return ONE
    if _is_const(b, 1):
        return a
    if isinstance(a, Const) and isinstance(b, Const) and a.is_exact and b.is_exact:
        exponent = b.value
        assert isinstance(exponent, Fraction)
        if exponent.denominator == 1 and (a.value != 0 or exponent > 0):
            return Const(a.value ** exponent.numerator)
    return Binary("pow", a, b)


def neg(a: Expr) -> Expr:
    if isinstance(a, Const):
        return Const(-a.value)
    if isinstance(a, Unary) and a.op == "neg":
        return a.arg
    return Unary("neg", a)


def func(op: str, a: Expr) -> Expr:
    """Apply a named elementary function."""
    if op not in FUNCTIONS:
        raise ValueError(f"Unknown function: {op}")
    return Unary(op, a)


def sin(a: ExprLike) -> Expr:
    return Unary("sin", as_expr(a))


def cos(a: ExprLike) -> Expr:
    return Unary("cos", as_expr(a))


def tan(a: ExprLike) -> Expr:
    return Unary("tan", as_expr(a))


def cot(a: ExprLike) -> Expr:
    return Unary("cot", as_expr(a))


def ln(a: ExprLike) -> Expr:
    return Unary("ln", as_expr(a))


def exp(a: ExprLike) -> Expr:
    return Unary("exp", as_expr(a))


def sqrt(a: ExprLike) -> Expr:
    return Unary("sqrt", as_expr(a))


def arccos(a: ExprLike) -> Expr:
    return Unary("arccos", as_expr(a))


def absolute(a: ExprLike) -> Expr:
    return Unary("abs", as_expr(a))


def walk(e: Expr) -> Iterator[Expr]:
    """Yield every node of ``e`` (pre-order, shared subtrees repeated)."""
    stack = [e]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(node.children()))


def free_names(e: Expr) -> tuple[set[str], set[str]]:
    """Return the variable names and parameter names appearing in ``e``."""
    variables: set[str] = set()
    params: set[str] = set()
    seen: set[int] = set()
    stack = [e]
    while stack:
        node = stack.pop()
        if id(node) in seen:
            continue
        seen.add(id(node))
        if isinstance(node, Var):
            variables.add(node.name)
        elif isinstance(node, Param):
            params.add(node.name)
        stack.extend(node.children())
    return variables, params


def depends_on(e: Expr, name: str) -> bool:
    return name in free_names(e)[0]


def _const_text(value: Number) -> str:
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    text = repr(float(value))
    if "inf" in text or "nan" in text:
        raise ValueError(f"Cannot print non-finite constant {value}")
    return text


def _precedence(e: Expr) -> int:
    if isinstance(e, Binary):
        if e.op in ("add", "sub"):
            return _PREC_ADD
        if e.op in ("mul", "div"):
            return _PREC_MUL
        return _PREC_POW
    if isinstance(e, Unary):
        return _PREC_NEG if e.op == "neg" else _PREC_ATOM
    return _PREC_ATOM


def _wrap(text: str, cond: bool) -> str:
    return f"({text})" if cond else text


def to_text(e: Expr) -> str:
    """
    Print ``e`` in the expression grammar.

    The output parses back to a structurally equal tree: negative and
    non-integer rational constants are parenthesised, binary operators are
    spaced so that ``1 / 2`` stays a division while ``(1/2)`` is a literal.
    """
    if isinstance(e, Const):
        text = _const_text(e.value)
        needs = e.value < 0 or (isinstance(e.value, Fraction) and e.value.denominator != 1)
        return _wrap(text, needs)
    if isinstance(e, (Var, Param)):
        return e.name
    if isinstance(e, Unary):
        if e.op != "neg":
            return f"{e.op}({to_text(e.arg)})"
        inner = e.arg
        plain = isinstance(inner, (Var, Param)) or _self_wrapped(inner) or (
            isinstance(inner, Unary) and inner.op != "neg"
        ) or (isinstance(inner, Binary) and inner.op == "pow")
        return "-" + _wrap(to_text(inner), not plain)
    assert isinstance(e, Binary)
    left, right = e.left, e.right
    if e.op == "pow":
        base = _wrap(to_text(left), _precedence(left) < _PREC_ATOM)
        if isinstance(right, Const) and isinstance(right.value, Fraction) and right.value.denominator == 1 and right.value >= 0:
            return f"{base}^{right.value.numerator}"
        inner = to_text(right)
        if isinstance(right, Const):
            inner = _const_text(right.value)
        return f"{base}^({inner})"
    symbol = _SYMBOLS[e.op]
    if e.op in ("add", "sub"):
        left_text = _wrap(to_text(left), _precedence(left) < _PREC_ADD)
        right_needs = _precedence(right) <= _PREC_ADD or (isinstance(right, Unary) and right.op == "neg")
        return f"{left_text} {symbol} {_wrap(to_text(right), right_needs)}"
    left_text = _wrap(to_text(left), _precedence(left) < _PREC_MUL)
    right_needs = _precedence(right) <= _PREC_NEG
    return f"{left_text} {symbol} {_wrap(to_text(right), right_needs)}"


def _self_wrapped(e: Expr) -> bool:
    """True for constants whose printed form already carries parentheses."""
    if not isinstance(e, Const):
        return False
    return e.value < 0 or (isinstance(e.value, Fraction) and e.value.denominator != 1)
