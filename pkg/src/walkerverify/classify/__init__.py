"""
Null frame, curvature endomorphism, Petrov type and holonomy of Walker
Einstein metrics.
"""

from .frame import (
    AGREEMENT_TOL,
    FRAME_TOL,
    NullFrame,
    T_at,
    T_batch,
    TBatch,
    TEndomorphism,
    require_reduced_gauge,
    t_from_batch,
)
from .identities import (
    IDENTITY_NAMES,
    PRINTED_WEYL_COEFFICIENTS,
    WEDGE_SIGN,
    WEYL_COEFFICIENTS,
    IdentityReport,
    identity_residuals,
    weyl_identity_suite,
)
from .petrov import (
    NEAR_FACTOR,
    HolonomyVerdict,
    PetrovDecision,
    classify_grid,
    decide_types,
    grid_points,
    holonomy_verdict,
    petrov_locus_root,
    petrov_type_at,
)

__all__ = [
    "AGREEMENT_TOL",
    "FRAME_TOL",
    "NullFrame",
    "TEndomorphism",
    "TBatch",
    "T_at",
    "T_batch",
    "require_reduced_gauge",
    "t_from_batch",
    "WEDGE_SIGN",
    "WEYL_COEFFICIENTS",
    "PRINTED_WEYL_COEFFICIENTS",
    "IDENTITY_NAMES",
    "IdentityReport",
    "identity_residuals",
    "weyl_identity_suite",
    "NEAR_FACTOR",
    "PetrovDecision",
    "HolonomyVerdict",
    "decide_types",
    "petrov_type_at",
    "holonomy_verdict",
    "grid_points",
    "classify_grid",
    "petrov_locus_root",
]
