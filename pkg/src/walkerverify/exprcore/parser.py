"""
Recursive descent parser for the expression grammar.

    expr     := term (('+' | '-') term)*
    term     := unary (('*' | '/') unary)*
    unary    := '-' unary | power
    power    := atom ('^' exponent)?
    exponent := INTEGER | '(' expr ')'
    atom     := NUMBER | NAME | FUNCTION '(' expr ')' | '(' expr ')'

``^`` binds tighter than unary minus. Numbers are decimals or rationals
written ``p/q`` without spaces. A minus sign directly in front of a numeric
literal that is not raised to a power yields a negative constant.

The tree is built without folding so that printing and parsing are inverse.
"""

from __future__ import annotations

import math
import re
from collections.abc import Iterable
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from ..errors import ExpressionSyntaxError, UnknownNameError
from .expr import FUNCTIONS, Binary, Const, Expr, Param, Unary, Var

DEFAULT_PARAMS = ("Lambda",)
NAMED_CONSTANTS = {"pi": math.pi}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<rational>\d+/\d+(?![\d.eE]))
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    """A lexical token with its offset in the source text."""

    kind: str
    text: str
    position: int


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, ending with an ``end`` token."""
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionSyntaxError(f"Unexpected character '{text[pos]}'", pos, text)
        kind = match.lastgroup
        assert kind is not None
        value = match.group()
        if kind == "rational" and tokens and tokens[-1].text in ("/", "^"):
            # "a/2/3" and "x^2/3" keep their operators; only the numerator is a literal
            match = re.compile(r"\d+").match(text, pos)
            assert match is not None
            kind, value = "number", match.group()
        if kind != "ws":
            tokens.append(Token(kind, value, pos))
        pos += len(value)
    tokens.append(Token("end", "", len(text)))
    return tokens


class ExpressionParser:
    """
    Parser over a token stream.

    Args:
        text: Expression source
        names: Allowed variable names (``None`` accepts any name)
        params: Names treated as parameters
    """

    def __init__(
        self,
        text: str,
        names: Optional[Iterable[str]] = None,
        params: Iterable[str] = DEFAULT_PARAMS,
    ):
        self.text = text
        self.names = None if names is None else frozenset(names)
        self.params = frozenset(params)
        self.tokens = tokenize(text)
        self.index = 0

    def _peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.index + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def _error(self, message: str, token: Optional[Token] = None) -> ExpressionSyntaxError:
        token = token or self._peek()
        return ExpressionSyntaxError(message, token.position, self.text)

    def _expect(self, text: str) -> Token:
        token = self._peek()
        if token.text != text or token.kind == "end":
            found = token.text or "end of input"
            raise self._error(f"Expected '{text}' but found '{found}'", token)
        return self._advance()

    def parse(self) -> Expr:
        if self._peek().kind == "end":
            raise self._error("Empty expression")
        result = self._expr()
        if self._peek().kind != "end":
            raise self._error(f"Unexpected '{self._peek().text}'")
        return result

    def _expr(self) -> Expr:
        left = self._term()
        while self._peek().text in ("+", "-") and self._peek().kind == "op":
            op = "add" if self._advance().text == "+" else "sub"
            left = Binary(op, left, self._term())
        return left

    def _term(self) -> Expr:
        left = self._unary()
        while self._peek().text in ("*", "/") and self._peek().kind == "op":
            op = "mul" if self._advance().text == "*" else "div"
            left = Binary(op, left, self._unary())
        return left

    def _unary(self) -> Expr:
        token = self._peek()
        if token.kind == "op" and token.text == "-":
            literal = self._peek(1)
            after = self._peek(2)
            if literal.kind in ("number", "rational") and after.text != "^":
                self._advance()
                self._advance()
                return Const(-_literal_value(literal))
            self._advance()
            return Unary("neg", self._unary())
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self._peek().text == "^":
            self._advance()
            return Binary("pow", base, self._exponent())
        return base

    def _exponent(self) -> Expr:
        token = self._peek()
        if token.kind == "number" and token.text.isdigit():
            self._advance()
            return Const(int(token.text))
        if token.text == "(":
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        raise self._error("Exponent must be an integer or a parenthesised expression")

    def _atom(self) -> Expr:
        token = self._peek()
        if token.kind in ("number", "rational"):
            self._advance()
            return Const(_literal_value(token))
        if token.kind == "name":
            self._advance()
            return self._name(token)
        if token.text == "(":
            self._advance()
            inner = self._expr()
            self._expect(")")
            return inner
        found = token.text or "end of input"
        raise self._error(f"Unexpected '{found}'", token)

    def _name(self, token: Token) -> Expr:
        name = token.text
        if name in FUNCTIONS:
            self._expect("(")
            arg = self._expr()
            self._expect(")")
            return Unary(name, arg)
        if self._peek().text == "(":
            raise UnknownNameError(name, token.position)
        if name in self.params:
            return Param(name)
        if name in NAMED_CONSTANTS:
            return Const(NAMED_CONSTANTS[name])
        if self.names is not None and name not in self.names:
            raise UnknownNameError(name, token.position)
        return Var(name)


def _literal_value(token: Token) -> Fraction | float:
    if token.kind == "rational":
        num, den = token.text.split("/")
        if int(den) == 0:
            raise ExpressionSyntaxError("Zero denominator in rational literal", token.position)
        return Fraction(int(num), int(den))
    if re.fullmatch(r"\d+", token.text):
        return Fraction(int(token.text))
    return float(token.text)


def parse(
    text: str,
    names: Optional[Iterable[str]] = None,
    params: Iterable[str] = DEFAULT_PARAMS,
) -> Expr:
    """
    Parse expression text.

    Args:
        text: Source in the expression grammar
        names: Allowed variable names; ``None`` accepts every name
        params: Names read as parameters (default ``Lambda``)

    Returns:
        The expression tree, unfolded

    Raises:
        ExpressionSyntaxError: Malformed input, with the offending position
        UnknownNameError: A name outside ``names`` and ``params``
    """
    return ExpressionParser(text, names, params).parse()
