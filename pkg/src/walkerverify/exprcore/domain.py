"""
Points and sampling domains.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional

from .expr import Expr
from .parser import parse


@dataclass(frozen=True)
class Point:
    """Assignment of coordinate values plus parameter values."""

    values: Mapping[str, float]
    """Variable name to value"""

    params: Mapping[str, float] = field(default_factory=dict)
    """Parameter name to value (e.g. ``Lambda``)"""

    def __getitem__(self, name: str) -> float:
        if name in self.values:
            return self.values[name]
        return self.params[name]

    def with_values(self, **updates: float) -> Point:
        return Point({**self.values, **updates}, self.params)

    def as_dict(self) -> dict[str, float]:
        return {k: float(v) for k, v in self.values.items()}


@dataclass(frozen=True)
class Constraint:
    """
    Named inequality ``expr > margin`` excluding a singular locus.

    Sampling rejects every point where the inequality fails.
    """

    name: str
    expr: Expr
    margin: float = 0.0

    @classmethod
    def from_text(cls, text: str, margin: float = 0.0, name: Optional[str] = None) -> Constraint:
        return cls(name or f"{text} > {margin}", parse(text), margin)


@dataclass(frozen=True)
class DomainBox:
    """Closed interval per variable together with excluded conditions."""

    intervals: tuple[tuple[str, float, float], ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        names = [name for name, _, _ in self.intervals]
        if len(set(names)) != len(names):
            raise ValueError(f"Duplicate variable in domain box: {names}")
        for name, lo, hi in self.intervals:
            if not lo <= hi:
                raise ValueError(f"Empty interval for {name}: [{lo}, {hi}]")

    @classmethod
    def of(cls, constraints: tuple[Constraint, ...] = (), **intervals: tuple[float, float]) -> DomainBox:
        return cls(tuple((k, float(lo), float(hi)) for k, (lo, hi) in intervals.items()), constraints)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _, _ in self.intervals)

    def interval(self, name: str) -> tuple[float, float]:
        for var_name, lo, hi in self.intervals:
            if var_name == name:
                return lo, hi
        raise KeyError(name)

    def contains(self, values: Mapping[str, float]) -> bool:
        """Interval membership only; constraints are checked by the sampler."""
        return all(lo <= values[name] <= hi for name, lo, hi in self.intervals if name in values)

    def restrict(self, **intervals: tuple[float, float]) -> DomainBox:
        """Replace some intervals, keeping order and constraints."""
        new = tuple(
            (name, *map(float, intervals[name])) if name in intervals else (name, lo, hi)
            for name, lo, hi in self.intervals
        )
        return DomainBox(new, self.constraints)  # type: ignore[arg-type]

    def with_constraints(self, *constraints: Constraint) -> DomainBox:
        return DomainBox(self.intervals, self.constraints + constraints)
