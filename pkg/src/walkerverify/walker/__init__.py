"""
Walker metrics, the reduced Einstein system and the Killing-form constructions.
"""

from .lewandowski import (
    LEWANDOWSKI_BOX,
    MAX_DEGREE,
    ComplexExpr,
    lewandowski_A,
    lewandowski_background,
    lewandowski_metric,
    lewandowski_potential,
    polynomial,
    polynomial_derivative,
)
from .metric import LAMBDA_EXPR, SURFACE_NAMES, EinsteinAnsatz, ExprMatrix, Signature, WalkerMetric, assemble
from .reduction import (
    DEFAULT_LAMBDA,
    HYPERBOLIC_BOX,
    SPHERE_BOX,
    PotentialFunction,
    ReducedSystemResiduals,
    assemble_from_potential,
    background,
    default_box,
    f_to_A,
    hyperbolic_background,
    hyperbolic_f_residual,
    hyperbolic_H0_residual,
    hyperbolic_laplacian,
    killing_family_check,
    particular_H0,
    reduced_system_residuals,
    sphere_background,
    sphere_f_residual,
    sphere_H0_residual,
    sphere_laplacian,
)

__all__ = [
    "LAMBDA_EXPR",
    "SURFACE_NAMES",
    "Signature",
    "ExprMatrix",
    "EinsteinAnsatz",
    "WalkerMetric",
    "assemble",
    "DEFAULT_LAMBDA",
    "SPHERE_BOX",
    "HYPERBOLIC_BOX",
    "default_box",
    "PotentialFunction",
    "ReducedSystemResiduals",
    "assemble_from_potential",
    "background",
    "f_to_A",
    "particular_H0",
    "sphere_background",
    "hyperbolic_background",
    "sphere_laplacian",
    "hyperbolic_laplacian",
    "sphere_f_residual",
    "sphere_H0_residual",
    "hyperbolic_f_residual",
    "hyperbolic_H0_residual",
    "killing_family_check",
    "reduced_system_residuals",
    "LEWANDOWSKI_BOX",
    "MAX_DEGREE",
    "ComplexExpr",
    "polynomial",
    "polynomial_derivative",
    "lewandowski_potential",
    "lewandowski_A",
    "lewandowski_background",
    "lewandowski_metric",
]
