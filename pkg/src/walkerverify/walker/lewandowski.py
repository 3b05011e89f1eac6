"""
Killing forms built from a holomorphic polynomial phi(z), z = x + i y.

Complex quantities are pairs of real expressions. With eps = sign(Lambda)
and P0 the conformal factor ``2 P0^2 = (1 + eps z zbar)^2``, the real
potential is

    L = 2 Re(phi d_z ln P0 - (1/2) d_z phi)
      = 2 eps (Re phi x + Im phi y) / (1 + eps |z|^2) - Re phi'

and ``A = W dz + conj(W) dzbar`` with ``W = i d_z L``, which in real
components is ``A = (d_y L, -d_x L)``.
"""

from __future__ import annotations

from collections.abc import Sequence
from typing import NamedTuple, Optional

from ..errors import PreconditionError, UnsupportedDegreeError
from ..exprcore import ZERO, DomainBox, Expr, as_expr, differentiate, var
from .metric import LAMBDA_EXPR, EinsteinAnsatz, ExprMatrix, WalkerMetric

MAX_DEGREE = 4

X = var("x")
Y = var("y")

LEWANDOWSKI_BOX = DomainBox.of(v=(-1.0, 1.0), x=(-0.5, 0.5), y=(-0.5, 0.5), u=(-0.5, 0.5))


class ComplexExpr(NamedTuple):
    """Real and imaginary parts of a complex-valued expression."""

    re: Expr
    im: Expr

    @classmethod
    def constant(cls, value: complex) -> ComplexExpr:
        return cls(as_expr(float(value.real)), as_expr(float(value.imag)))

    def __add__(self, other: ComplexExpr) -> ComplexExpr:  # type: ignore[override]
        return ComplexExpr(self.re + other.re, self.im + other.im)

    def __mul__(self, other: ComplexExpr) -> ComplexExpr:  # type: ignore[override]
        return ComplexExpr(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def d_z(self) -> ComplexExpr:
        """``(1/2)(d_x - i d_y)`` applied to the pair."""
        re_x, im_x = differentiate(self.re, "x"), differentiate(self.im, "x")
        re_y, im_y = differentiate(self.re, "y"), differentiate(self.im, "y")
        return ComplexExpr((re_x + im_y) / 2, (im_x - re_y) / 2)


Z = ComplexExpr(X, Y)


def _coefficients(coefficients: Sequence[complex | float]) -> tuple[complex, ...]:
    values = tuple(complex(c) for c in coefficients)
    while values and values[-1] == 0:
        values = values[:-1]
    if len(values) - 1 > MAX_DEGREE:
        raise UnsupportedDegreeError(
            f"Polynomials of degree {len(values) - 1} are not supported (maximum {MAX_DEGREE})",
            error_code="degree",
            details={"degree": len(values) - 1},
        )
    return values


def polynomial(coefficients: Sequence[complex | float]) -> ComplexExpr:
    """``sum c_k z^k`` as a pair of real expressions."""
    total = ComplexExpr(ZERO, ZERO)
    monomial = ComplexExpr(as_expr(1), ZERO)
    for k, c in enumerate(_coefficients(coefficients)):
        if k:
            monomial = monomial * Z
        if c != 0:
            total = total + ComplexExpr.constant(c) * monomial
    return total


def polynomial_derivative(coefficients: Sequence[complex | float]) -> ComplexExpr:
    """The holomorphic derivative ``phi'``."""
    values = _coefficients(coefficients)
    return polynomial([k * c for k, c in enumerate(values)][1:])


def _sign(lam: float) -> int:
    if lam == 0:
        raise PreconditionError("Lambda must be nonzero", error_code="lambda")
    return 1 if lam > 0 else -1


def lewandowski_potential(coefficients: Sequence[complex | float], lam: float) -> Expr:
    """The real potential L of ``phi = sum c_k z^k``."""
    eps = _sign(lam)
    phi = polynomial(coefficients)
    if phi.re == ZERO and phi.im == ZERO:
        return ZERO
    conformal = 1 + eps * (X ** 2 + Y ** 2)
    return 2 * eps * (phi.re * X + phi.im * Y) / conformal - polynomial_derivative(coefficients).re


def lewandowski_A(coefficients: Sequence[complex | float], lam: float) -> tuple[Expr, Expr]:
    """
    Real components of the Killing form ``A = W dz + conj(W) dzbar``.

    Args:
        coefficients: Coefficients ``c_0, c_1, ...`` of phi (degree at most 4)
        lam: Cosmological constant (only its sign enters)

    Returns:
        ``(A_x, A_y)``

    Raises:
        UnsupportedDegreeError: phi has degree above 4
        PreconditionError: ``lam`` is zero
    """
    L = lewandowski_potential(coefficients, lam)
    # W = i d_z L; A_x = 2 Re W, A_y = -2 Im W
    d_z = ComplexExpr(L, ZERO).d_z()
    W = ComplexExpr(-d_z.im, d_z.re)
    return (2 * W.re, -(2 * W.im))


def lewandowski_background(lam: float) -> ExprMatrix:
    """``(4 / |Lambda|)(1 + eps |z|^2)^-2 (dx^2 + dy^2)``."""
    eps = _sign(lam)
    factor = 4 / (eps * LAMBDA_EXPR) / (1 + eps * (X ** 2 + Y ** 2)) ** 2
    return ((factor, ZERO), (ZERO, factor))


def lewandowski_metric(
    coefficients: Sequence[complex | float],
    lam: float,
    box: Optional[DomainBox] = None,
    label: str = "",
) -> WalkerMetric:
    """
    Einstein Walker metric with the Killing form of phi.

    H = Lambda v^2 - Lambda L^2 on the constant-curvature background in z.
    """
    L = lewandowski_potential(coefficients, lam)
    return WalkerMetric.from_ansatz(
        lewandowski_background(lam),
        lewandowski_A(coefficients, lam),
        EinsteinAnsatz(-(LAMBDA_EXPR * L ** 2)),
        box or LEWANDOWSKI_BOX,
        label,
    )


__all__ = [
    "MAX_DEGREE",
    "LEWANDOWSKI_BOX",
    "ComplexExpr",
    "polynomial",
    "polynomial_derivative",
    "lewandowski_potential",
    "lewandowski_A",
    "lewandowski_background",
    "lewandowski_metric",
]
