"""
Report models.
"""

from .reports import (
    SCHEMA_VERSION,
    CheckReport,
    ClassificationReport,
    ClassificationRow,
    GaugeDemoReport,
    GaugeDemoRow,
    HolonomyType,
    KillingReport,
    LocusWitness,
    PetrovType,
    ReportModel,
)

__all__ = [
    "SCHEMA_VERSION",
    "ReportModel",
    "PetrovType",
    "HolonomyType",
    "CheckReport",
    "ClassificationRow",
    "ClassificationReport",
    "LocusWitness",
    "KillingReport",
    "GaugeDemoRow",
    "GaugeDemoReport",
]
