"""
Report models of the verification commands.

Every report carries a schema version and serialises deterministically with
``model_dump_json(by_alias=True, indent=2)``.
"""

from enum import Enum
from typing import Any, Optional

from pydantic import BaseModel, ConfigDict, Field

SCHEMA_VERSION = 1


class PetrovType(str, Enum):
    """Petrov types occurring for Walker Einstein metrics."""
    II = "II"
    D = "D"


class HolonomyType(str, Enum):
    """Holonomy of a Walker Einstein metric."""
    INDECOMPOSABLE = "sim(2)"
    DECOMPOSABLE = "Rp^q+so(2)"


class ReportModel(BaseModel):
    """Base of all reports."""

    model_config = ConfigDict(populate_by_name=True)

    schema_version: int = Field(default=SCHEMA_VERSION, alias="schema", description="Report schema version")

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


class CheckReport(ReportModel):
    """Einstein residual and curvature identities of one metric."""

    metric: str = Field(..., description="Metric name")
    lam: float = Field(..., alias="Lambda", description="Cosmological constant")
    samples: int = Field(..., ge=1, description="Number of sampled points")
    seed: int = Field(..., description="Base seed")
    einstein_residual: float = Field(..., description="Largest scale-relative Einstein residual")
    witness: dict[str, float] = Field(default_factory=dict, description="Point of the largest residual")
    symmetries: dict[str, float] = Field(default_factory=dict, description="Curvature identity residuals")
    scalar_trace: Optional[float] = Field(default=None, description="|s - 4 Lambda| residual")
    tolerance: float = Field(..., gt=0, description="Einstein tolerance")
    passed: bool = Field(..., description="Residual below tolerance")


class ClassificationRow(BaseModel):
    """Curvature endomorphism and Petrov type at one point."""

    point: dict[str, float] = Field(..., description="Coordinates of the point")
    T: list[list[float]] = Field(..., description="Entries T_i^j")
    det_T: float = Field(..., description="Determinant of T")
    trace_T: float = Field(default=0.0, description="Trace of T")
    petrov_type: PetrovType = Field(..., description="Petrov type")
    near_degenerate: bool = Field(default=False, description="det T within ten times the threshold")


class LocusWitness(BaseModel):
    """A root of the type D locus along one coordinate."""

    coordinate: str = Field(..., description="Coordinate varied")
    value: float = Field(..., description="Root location")
    point: dict[str, float] = Field(..., description="Point on the locus")
    det_T: float = Field(..., description="det T at the root")
    petrov_type: PetrovType = Field(..., description="Type at the root")
    left_type: PetrovType = Field(..., description="Type slightly below the root")
    right_type: PetrovType = Field(..., description="Type slightly above the root")


class ClassificationReport(ReportModel):
    """Per-point Petrov types with the holonomy verdict."""

    metric: str = Field(..., description="Metric name")
    lam: float = Field(..., alias="Lambda", description="Cosmological constant")
    rows: list[ClassificationRow] = Field(default_factory=list, description="Grid rows")
    holonomy: HolonomyType = Field(..., description="Holonomy verdict")
    holonomy_note: str = Field(default="", description="Caveat of the sampled verdict")
    locus: list[LocusWitness] = Field(default_factory=list, description="Type D locus witnesses")


class KillingReport(ReportModel):
    """Killing residuals and structure constants of a list of fields."""

    metric: str = Field(..., description="Metric name")
    fields: list[str] = Field(..., description="Vector fields")
    residuals: list[float] = Field(..., description="Killing residual per field")
    structure_constants: list[list[list[float]]] = Field(default_factory=list, description="C[i][j][k]")
    bracket_residuals: list[float] = Field(default_factory=list, description="Fit residual per bracket")
    jacobi_residual: float = Field(default=0.0, description="Jacobi identity residual")
    closed: bool = Field(..., description="Brackets lie in the span")
    abelian: bool = Field(..., description="All brackets vanish")
    passed: bool = Field(..., description="Killing and closed")


class GaugeDemoRow(BaseModel):
    """Flow end point against the closed-form transformation."""

    u: float
    x: float
    y: float
    closed_x: float
    closed_y: float
    deviation: float


class GaugeDemoReport(ReportModel):
    """Flow integration compared with a closed-form transformation."""

    metric: str = Field(..., description="Metric name")
    lam: float = Field(..., alias="Lambda", description="Cosmological constant")
    start: dict[str, float] = Field(..., description="Initial point (x, y) at u0")
    rows: list[GaugeDemoRow] = Field(default_factory=list, description="Per-u comparison")
    max_deviation: float = Field(default=0.0, description="Largest deviation")
    round_trip: Optional[float] = Field(default=None, description="Distance after integrating back to u0")
    extra: dict[str, Any] = Field(default_factory=dict, description="Further diagnostics")
