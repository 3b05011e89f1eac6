"""
Symbolic scalar expressions: parsing, exact differentiation, vectorised
evaluation and sampled zero testing.
"""

from .calculus import differentiate, gradient, substitute, substitute_params
from .domain import Constraint, DomainBox, Point
from .evaluate import BatchEvaluator, evaluate, term_scale
from .expr import (
    HALF,
    ONE,
    TWO,
    ZERO,
    Binary,
    Const,
    Expr,
    Param,
    Unary,
    Var,
    absolute,
    arccos,
    as_expr,
    const,
    cos,
    cot,
    exp,
    free_names,
    ln,
    param,
    sin,
    sqrt,
    tan,
    to_text,
    var,
)
from .parser import parse
from .sampling import ZeroTestResult, is_zero_sampled, point_at, sample_points

__all__ = [
    "Expr",
    "Const",
    "Var",
    "Param",
    "Unary",
    "Binary",
    "ZERO",
    "ONE",
    "TWO",
    "HALF",
    "as_expr",
    "const",
    "var",
    "param",
    "sin",
    "cos",
    "tan",
    "cot",
    "ln",
    "exp",
    "sqrt",
    "arccos",
    "absolute",
    "free_names",
    "to_text",
    "parse",
    "differentiate",
    "gradient",
    "substitute",
    "substitute_params",
    "Point",
    "DomainBox",
    "Constraint",
    "BatchEvaluator",
    "evaluate",
    "term_scale",
    "sample_points",
    "point_at",
    "is_zero_sampled",
    "ZeroTestResult",
]
