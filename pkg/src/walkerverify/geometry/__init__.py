"""
Charts, symbolic metrics and their pointwise curvature.
"""

from .chart import (
    LAMBDA,
    SURFACE_COORDS,
    WALKER_COORDS,
    Chart,
    MetricJet,
    MetricTensor,
    inverse_2x2,
    point_env,
    raise_index,
    with_lambda,
)
from .curvature import (
    CurvatureBatch,
    CurvatureBundle,
    ResidualMaximum,
    curvature_at,
    curvature_batch,
    einstein_residual_at,
    einstein_residuals,
    invert_metric,
    max_residual,
    sample_metric_points,
    scalar_trace_residual,
    symmetry_residuals,
)

__all__ = [
    "LAMBDA",
    "WALKER_COORDS",
    "SURFACE_COORDS",
    "Chart",
    "MetricJet",
    "MetricTensor",
    "point_env",
    "inverse_2x2",
    "raise_index",
    "with_lambda",
    "CurvatureBatch",
    "CurvatureBundle",
    "ResidualMaximum",
    "curvature_at",
    "curvature_batch",
    "einstein_residual_at",
    "einstein_residuals",
    "invert_metric",
    "max_residual",
    "sample_metric_points",
    "scalar_trace_residual",
    "symmetry_residuals",
]
