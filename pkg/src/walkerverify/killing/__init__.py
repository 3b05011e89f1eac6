"""
Killing vector fields: Lie derivatives, Killing one-forms and algebra
certificates.
"""

from .algebra import AlgebraCertificate, BracketFit, algebra_certificate, fit_in_span, jacobi_violation
from .fields import (
    DEFAULT_KILLING_TOL,
    KillingFormResult,
    KillingResidual,
    VectorField,
    field_values,
    killing_oneform_check,
    killing_residual,
    lie_bracket,
    lie_derivative_terms,
)

__all__ = [
    "DEFAULT_KILLING_TOL",
    "VectorField",
    "KillingResidual",
    "KillingFormResult",
    "field_values",
    "killing_residual",
    "killing_oneform_check",
    "lie_bracket",
    "lie_derivative_terms",
    "AlgebraCertificate",
    "BracketFit",
    "algebra_certificate",
    "fit_in_span",
    "jacobi_violation",
]
