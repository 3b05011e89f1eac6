"""
YAML metric definition files.

A file has the sections ``chart``, ``params``, ``h``, ``A``, ``H0``, ``H1``
(or ``H``), ``domain`` and ``killing``; every expression is a quoted string
in the expression grammar::

    name: example1
    chart: [v, x, y, u]
    params: {Lambda: -1.0}
    h:
      - ["(36*Lambda^2*u^2*x^4 + 1)/(-Lambda*x^2)", "..."]
      - ["...", "1/(-Lambda*x^2)"]
    A: ["0", "0"]
    H0: "3*Lambda*x^4"
    domain:
      v: [-1, 1]
      x: [0.3, 2]
      y: [-1, 1]
      u: [-0.5, 0.5]
      constraints: []
    killing:
      - ["0", "0", "1", "0"]
"""

from __future__ import annotations

from pathlib import Path
from typing import Any, Optional, Union

import yaml
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from ..errors import DSLFormatError, WalkerVerifyError
from ..exprcore import Constraint, DomainBox, to_text
from ..geometry import WALKER_COORDS
from ..killing import VectorField
from ..utils.logging import get_logger
from ..walker import WalkerMetric
from .entries import CatalogEntry

logger = get_logger(__name__)

Scalar = Union[str, float, int]


class ConstraintSpec(BaseModel):
    """``expr > margin`` excluded from sampling."""

    expr: str
    margin: float = 0.0
    name: Optional[str] = None


class DomainSpec(BaseModel):
    """Intervals of the four coordinates plus constraints."""

    v: tuple[float, float] = (-1.0, 1.0)
    x: tuple[float, float] = (-1.0, 1.0)
    y: tuple[float, float] = (-1.0, 1.0)
    u: tuple[float, float] = (-0.5, 0.5)
    constraints: list[ConstraintSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_intervals(self) -> DomainSpec:
        for name in WALKER_COORDS:
            lo, hi = getattr(self, name)
            if lo > hi:
                raise ValueError(f"Empty interval for {name}: [{lo}, {hi}]")
        return self


class MetricDocument(BaseModel):
    """Schema of a metric definition file."""

    name: str = "metric"
    description: str = ""
    chart: list[str] = Field(default_factory=lambda: list(WALKER_COORDS))
    params: dict[str, float] = Field(default_factory=lambda: {"Lambda": 0.0})
    h: list[list[Scalar]]
    A: list[Scalar] = Field(default_factory=lambda: [0, 0])
    H: Optional[Scalar] = None
    H0: Optional[Scalar] = None
    H1: Scalar = 0
    domain: DomainSpec = Field(default_factory=DomainSpec)
    killing: list[list[Scalar]] = Field(default_factory=list)
    einstein: bool = True

    @field_validator("chart")
    @classmethod
    def check_chart(cls, value: list[str]) -> list[str]:
        if tuple(value) != WALKER_COORDS:
            raise ValueError(f"chart must be {list(WALKER_COORDS)}")
        return value

    @field_validator("h")
    @classmethod
    def check_h(cls, value: list[list[Scalar]]) -> list[list[Scalar]]:
        if len(value) != 2 or any(len(row) != 2 for row in value):
            raise ValueError("h must be a 2x2 matrix")
        return value

    @field_validator("killing")
    @classmethod
    def check_killing(cls, value: list[list[Scalar]]) -> list[list[Scalar]]:
        if any(len(row) != 4 for row in value):
            raise ValueError("Killing fields need four components")
        return value

    @model_validator(mode="after")
    def check_H(self) -> MetricDocument:
        if (self.H is None) == (self.H0 is None):
            raise ValueError("Give exactly one of H and H0")
        if len(self.A) != 2:
            raise ValueError("A must have two components")
        return self


def _text(value: Scalar) -> str:
    return value if isinstance(value, str) else repr(float(value))


def document_to_entry(doc: MetricDocument) -> CatalogEntry:
    """
    Build a catalog entry from a validated document.

    Raises:
        DSLFormatError: An expression does not parse
    """
    h = [[_text(c) for c in row] for row in doc.h]
    A = [_text(c) for c in doc.A]
    try:
        box = DomainBox.of(
            tuple(Constraint.from_text(c.expr, c.margin, c.name) for c in doc.domain.constraints),
            **{name: getattr(doc.domain, name) for name in WALKER_COORDS},
        )
        if doc.H is not None:
            metric = WalkerMetric.build(h, A, box, H=_text(doc.H), label=doc.name)
        else:
            metric = WalkerMetric.build(h, A, box, H0=_text(doc.H0), H1=_text(doc.H1), label=doc.name)
        killing = tuple(VectorField.from_text([_text(c) for c in row]) for row in doc.killing)
    except WalkerVerifyError as e:
        raise DSLFormatError(
            f"Invalid expression in '{doc.name}': {e.message}",
            error_code="expression",
            details=e.details,
        ) from e
    return CatalogEntry(
        doc.name,
        metric,
        float(doc.params.get("Lambda", 0.0)),
        doc.description,
        einstein=doc.einstein,
        killing=killing,
    )


def parse_dsl(text: str, source: str = "<string>") -> CatalogEntry:
    """
    Parse the YAML text of a metric definition.

    Raises:
        DSLFormatError: Invalid YAML, schema violations or bad expressions
    """
    try:
        data: Any = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise DSLFormatError(f"{source} is not valid YAML: {e}", error_code="yaml") from e
    if not isinstance(data, dict):
        raise DSLFormatError(f"{source} must contain a mapping", error_code="schema")
    try:
        doc = MetricDocument.model_validate(data)
    except ValidationError as e:
        raise DSLFormatError(
            f"{source} does not match the metric schema",
            error_code="schema",
            details={"errors": [err["msg"] for err in e.errors()]},
        ) from e
    return document_to_entry(doc)


def load_dsl(path: Union[str, Path]) -> CatalogEntry:
    path = Path(path)
    if not path.is_file():
        raise DSLFormatError(f"Metric file {path} does not exist", error_code="missing-file")
    entry = parse_dsl(path.read_text(encoding="utf-8"), str(path))
    logger.debug("Loaded metric '%s' from %s", entry.name, path)
    return entry


def entry_to_document(entry: CatalogEntry) -> MetricDocument:
    metric = entry.metric
    names = set(metric.box.names)
    domain = DomainSpec(
        **{name: metric.box.interval(name) for name in WALKER_COORDS if name in names},
        constraints=[ConstraintSpec(expr=to_text(c.expr), margin=c.margin, name=c.name) for c in metric.box.constraints],
    )
    fields: dict[str, Any] = {}
    if metric.ansatz is not None:
        fields["H0"] = to_text(metric.ansatz.H0)
        fields["H1"] = to_text(metric.ansatz.H1)
    else:
        fields["H"] = to_text(metric.H)
    return MetricDocument(
        name=entry.name,
        description=entry.description,
        params={"Lambda": entry.lam},
        h=[[to_text(c) for c in row] for row in metric.h],
        A=[to_text(c) for c in metric.A],
        domain=domain,
        killing=[[to_text(c) for c in k.components] for k in entry.killing],
        einstein=entry.einstein,
        **fields,
    )


def export_entry(entry: CatalogEntry) -> str:
    """YAML text of an entry; ``parse_dsl`` reads it back."""
    doc = entry_to_document(entry)
    data = doc.model_dump(mode="json")
    return yaml.safe_dump(data, sort_keys=False, allow_unicode=True, default_flow_style=None)


def write_dsl(entry: CatalogEntry, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(export_entry(entry), encoding="utf-8")
    return path


__all__ = [
    "ConstraintSpec",
    "DomainSpec",
    "MetricDocument",
    "document_to_entry",
    "parse_dsl",
    "load_dsl",
    "entry_to_document",
    "export_entry",
    "write_dsl",
]
