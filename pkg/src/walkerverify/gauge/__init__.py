"""
Walker coordinate transformations: the v-shift, the flow removing A and
numeric pullbacks.
"""

from .flow import FLOW_COORDS, FlowResult, FlowTransform, flow_transform_for, integrate_flow
from .pullback import (
    DEFAULT_FAMILY_TOL,
    FamilyComparison,
    FlowComparison,
    Transform,
    compare_flow_with_closed_form,
    family_isometry_test,
    pullback_at,
    pullback_batch,
    transform_jacobian,
)
from .transforms import (
    ClosedFormTransform,
    closed_form_from_vshift,
    pullback_metric,
    transform_points,
    vshift_function,
    vshift_remove_H1,
)

__all__ = [
    "FLOW_COORDS",
    "FlowTransform",
    "FlowResult",
    "flow_transform_for",
    "integrate_flow",
    "ClosedFormTransform",
    "closed_form_from_vshift",
    "pullback_metric",
    "transform_points",
    "vshift_function",
    "vshift_remove_H1",
    "Transform",
    "DEFAULT_FAMILY_TOL",
    "FamilyComparison",
    "FlowComparison",
    "compare_flow_with_closed_form",
    "family_isometry_test",
    "pullback_at",
    "pullback_batch",
    "transform_jacobian",
]
