"""
Built-in metrics: the worked examples in both coordinate presentations,
the Lewandowski family and a handful of controls.

Each entry keeps Lambda symbolic; ``lam`` is only the default value bound to
it. The ``-original`` entries carry A != 0 and are related to their
transformed partner by the closed-form transformation stored on the partner.
"""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field
from math import pi
from typing import Optional

from ..exprcore import ZERO, Constraint, DomainBox, Expr, parse
from ..gauge import ClosedFormTransform
from ..killing import VectorField
from ..walker import (
    HYPERBOLIC_BOX,
    SPHERE_BOX,
    PotentialFunction,
    WalkerMetric,
    lewandowski_metric,
)

UNIT_BOX = DomainBox.of(v=(-1.0, 1.0), x=(-1.0, 1.0), y=(-1.0, 1.0), u=(-1.0, 1.0))

RHO_2 = "(1 + 3*Lambda*u*x^3)"
RHO_4 = "(exp(-Lambda*u)*cos(x))"

EXAMPLE2_BOX = HYPERBOLIC_BOX.with_constraints(Constraint.from_text(RHO_2, 0.1, "1 + 3 Lambda u x^3 > 0.1"))
EXAMPLE4_BOX = SPHERE_BOX.with_constraints(
    Constraint.from_text(f"0.9 - abs({RHO_4})", 0.0, "exp(-Lambda u)|cos x| <= 0.9")
)


@dataclass(frozen=True)
class LocusSpec:
    """Where to root-bracket a type D locus."""

    base: Mapping[str, float]
    coordinate: str
    bracket: tuple[float, float]


@dataclass(frozen=True)
class CatalogEntry:
    """A named metric together with everything known about it in closed form."""

    name: str
    metric: WalkerMetric
    lam: float
    """Default value of Lambda; its sign is fixed by the family"""

    description: str = ""
    einstein: bool = True
    """False for negative controls"""

    killing: tuple[VectorField, ...] = ()
    det_T: Optional[Expr] = None
    """Closed form of det T where one is known"""

    original: Optional[str] = None
    """Name of the entry this one is the gauge-transformed form of"""

    transform: Optional[ClosedFormTransform] = None
    """Coordinates of ``original`` in terms of this entry's coordinates"""

    potential: Optional[PotentialFunction] = None
    grid: Mapping[str, tuple[float, float, int]] = field(default_factory=dict)
    """Default classify grid"""

    fixed: Mapping[str, float] = field(default_factory=dict)
    """Coordinates held fixed by the default grid"""

    locus: Optional[LocusSpec] = None
    provenance: str = ""

    @property
    def box(self) -> DomainBox:
        return self.metric.box

    @property
    def reduced(self) -> bool:
        """True when A = 0 and H = Lambda v^2 + H0, so that T is defined."""
        ansatz = self.metric.ansatz
        return not self.metric.has_A and ansatz is not None and ansatz.H1 == ZERO

    def params(self, lam: Optional[float] = None) -> dict[str, float]:
        return {"Lambda": self.lam if lam is None else float(lam)}


def _fields(*components: tuple[str, ...] | list[str]) -> tuple[VectorField, ...]:
    return tuple(VectorField.from_text(list(c)) for c in components)


D_V = ("1", "0", "0", "0")
D_X = ("0", "1", "0", "0")
D_Y = ("0", "0", "1", "0")
D_U = ("0", "0", "0", "1")

WALKER_GRID = {"v": (-1.0, 1.0, 5), "x": (0.5, 1.5, 3)}


def controls() -> list[CatalogEntry]:
    """Flat, pp-wave, plane-wave and decomposable controls."""
    flat_h = [[1, 0], [0, 1]]
    return [
        CatalogEntry(
            "minkowski",
            WalkerMetric.build(flat_h, [0, 0], UNIT_BOX, H0="0", label="minkowski"),
            0.0,
            "Flat space in Walker coordinates",
            killing=_fields(D_V, D_X, D_Y, D_U),
        ),
        CatalogEntry(
            "ppwave-harmonic",
            WalkerMetric.build(flat_h, [0, 0], UNIT_BOX, H="x^2 - y^2", label="ppwave-harmonic"),
            0.0,
            "pp-wave with H = Re((x + iy)^2), Ricci-flat",
            killing=_fields(D_V, D_U),
        ),
        CatalogEntry(
            "ppwave-nonharmonic",
            WalkerMetric.build(flat_h, [0, 0], UNIT_BOX, H="x^2", label="ppwave-nonharmonic"),
            0.0,
            "pp-wave with a non-harmonic profile; Ric_uu = -1",
            einstein=False,
        ),
        CatalogEntry(
            "plane-wave-rosen",
            WalkerMetric.build(
                [["(exp(u) + exp(-u))^2/4", 0], [0, "cos(u)^2"]],
                [0, 0],
                DomainBox.of(v=(-1.0, 1.0), x=(-1.0, 1.0), y=(-1.0, 1.0), u=(-0.5, 0.5)),
                H="0",
                label="plane-wave-rosen",
            ),
            0.0,
            "Vacuum plane wave 2 dv du + cosh^2 u dx^2 + cos^2 u dy^2",
            killing=_fields(D_V, D_X, D_Y),
        ),
        CatalogEntry(
            "kerr-goldberg",
            WalkerMetric.build(flat_h, ["x", 0], UNIT_BOX, H="-v + x^2/2 - y^2", label="kerr-goldberg"),
            0.0,
            "Flat h with harmonic A_1 = x and H linear in v",
            killing=_fields(D_U),
        ),
        CatalogEntry(
            "product-decomposable",
            WalkerMetric.build(
                [["1/(-Lambda*x^2)", 0], [0, "1/(-Lambda*x^2)"]],
                [0, 0],
                HYPERBOLIC_BOX,
                H0="0",
                label="product-decomposable",
            ),
            -1.0,
            "Product of a Lorentzian and a Riemannian surface of equal curvature; T = 0",
            killing=_fields(D_Y, D_U),
            grid=WALKER_GRID,
            fixed={"y": 0.0, "u": 0.0},
        ),
    ]


def example1() -> list[CatalogEntry]:
    background = [["1/(-Lambda*x^2)", 0], [0, "1/(-Lambda*x^2)"]]
    original = CatalogEntry(
        "example1-original",
        WalkerMetric.build(background, [0, "2*x"], HYPERBOLIC_BOX, H0="-Lambda*x^4", label="example1-original"),
        -1.0,
        "Hyperbolic background with f = x^2 and c(u) = 1",
        killing=_fields(D_Y, D_U, ("2*v", "x", "y", "-2*u")),
        potential=PotentialFunction.from_text("x^2", "hyperbolic"),
    )
    transformed = CatalogEntry(
        "example1",
        WalkerMetric.build(
            [
                ["(36*Lambda^2*u^2*x^4 + 1)/(-Lambda*x^2)", "6*Lambda*u*x^2/(-Lambda*x^2)"],
                ["6*Lambda*u*x^2/(-Lambda*x^2)", "1/(-Lambda*x^2)"],
            ],
            [0, 0],
            HYPERBOLIC_BOX,
            H0="3*Lambda*x^4",
            label="example1",
        ),
        -1.0,
        "Example 1 after removing A by the flow",
        killing=_fields(D_Y, ("2*v", "x", "y", "-2*u"), ("0", "0", "-2*Lambda*x^3", "1")),
        det_T=parse("-9*Lambda^4*x^4*(x^4 + v^2)"),
        original="example1-original",
        transform=ClosedFormTransform.from_text({"y": "y + 2*Lambda*u*x^3"}, label="example1"),
        grid=WALKER_GRID,
        fixed={"y": 0.0, "u": 0.1},
        provenance=(
            "det T = -9 Lambda^4 x^4 (x^4 + v^2) is reproduced; it does not vanish on v = 0 "
            "for x != 0, so the v = 0 slice is type II"
        ),
    )
    return [original, transformed]


def example2() -> list[CatalogEntry]:
    background = [["1/(-Lambda*x^2)", 0], [0, "1/(-Lambda*x^2)"]]
    rho = RHO_2
    original = CatalogEntry(
        "example2-original",
        WalkerMetric.build(
            background, ["-x^2", "2*x*y"], HYPERBOLIC_BOX, H0="-Lambda*x^4*y^2", label="example2-original"
        ),
        -1.0,
        "Hyperbolic background with f = x^2 y",
        killing=_fields(D_U),
        potential=PotentialFunction.from_text("x^2*y", "hyperbolic"),
        provenance="H0 = -Lambda x^4 y^2; the printed -Lambda x^4 y does not solve the reduced system",
    )
    transformed = CatalogEntry(
        "example2",
        WalkerMetric.build(
            [
                [f"(36*Lambda^2*x^2*y^2*u^2 + 1/(x^2*{rho}^2))/(-Lambda)", f"6*Lambda*{rho}*y*u/(-Lambda)"],
                [f"6*Lambda*{rho}*y*u/(-Lambda)", f"{rho}^2/(x^2*(-Lambda))"],
            ],
            [0, 0],
            EXAMPLE2_BOX,
            H0=f"3*Lambda*x^4*y^2 + Lambda*x^6/{rho}^2",
            label="example2",
        ),
        -1.0,
        "Example 2 after removing A by the flow",
        killing=_fields(("3*v", "x", "y", "-3*u"), ("0", "Lambda*x^4", "-2*Lambda*x^3*y", "1")),
        original="example2-original",
        transform=ClosedFormTransform.from_text(
            {"x": f"x*{rho}^(-1/3)", "y": f"y*{rho}^(2/3)"}, label="example2"
        ),
        grid={"v": (-1.0, 1.0, 5), "x": (0.5, 1.0, 3)},
        fixed={"y": 0.5, "u": 0.1},
    )
    return [original, transformed]


def example3() -> list[CatalogEntry]:
    background = [["1/Lambda", 0], [0, "sin(x)^2/Lambda"]]
    f = "(ln(tan(x/2))*cos(x) + 1)"
    original = CatalogEntry(
        "example3-original",
        WalkerMetric.build(
            background,
            [0, "cos(x) - ln(tan(x/2))*sin(x)^2"],
            SPHERE_BOX,
            H0=f"-Lambda*{f}^2",
            label="example3-original",
        ),
        1.0,
        "Sphere background with f = ln(tan(x/2)) cos x + 1",
        killing=_fields(D_Y, D_U),
        potential=PotentialFunction.from_text(f, "sphere"),
        provenance="H0 = -Lambda f^2 pairs with the transformed H0; H0 = Lambda f is kept as example3-original-printed",
    )
    printed = CatalogEntry(
        "example3-original-printed",
        WalkerMetric.build(
            background,
            [0, "cos(x) - ln(tan(x/2))*sin(x)^2"],
            SPHERE_BOX,
            H0=f"Lambda*{f}",
            label="example3-original-printed",
        ),
        1.0,
        "Example 3 in the original coordinates with the printed H0 = Lambda f",
        einstein=False,
        potential=PotentialFunction.from_text(f, "sphere"),
        provenance="Not Einstein: H0 = Lambda f fails the Poisson equation for H0",
    )
    transformed = CatalogEntry(
        "example3",
        WalkerMetric.build(
            [["1/Lambda + 4*Lambda*u^2/sin(x)^4", "2*u/sin(x)"], ["2*u/sin(x)", "sin(x)^2/Lambda"]],
            [0, 0],
            SPHERE_BOX,
            H0="-Lambda*(1/sin(x)^2 + ln(cot(x/2))^2)",
            label="example3",
        ),
        1.0,
        "Example 3 after removing A by the flow",
        killing=_fields(D_Y, ("0", "0", "Lambda*(cos(x)/sin(x)^2 - ln(tan(x/2)))", "1")),
        det_T=parse("-Lambda^4/sin(x)^4*(v^2 + (ln(cot(x/2))*cos(x) - 1)^2)"),
        original="example3-original",
        transform=ClosedFormTransform.from_text(
            {"y": "y + Lambda*u*(ln(tan(x/2)) - cos(x)/sin(x)^2)"}, label="example3"
        ),
        grid={"v": (-0.5, 0.5, 3), "x": (0.5, 1.5, 5)},
        fixed={"y": 0.0, "u": 0.1},
        locus=LocusSpec({"v": 0.0, "y": 0.0, "u": 0.1}, "x", (0.45, 0.8)),
        provenance="Type D where v = 0 and ln(cot(x/2)) cos x = 1, near x = 0.59",
    )
    return [original, printed, transformed]


def example4() -> list[CatalogEntry]:
    rho = RHO_4
    original = CatalogEntry(
        "example4-original",
        WalkerMetric.build(
            [["1/Lambda", 0], [0, "sin(x)^2/Lambda"]],
            ["-cot(x)", "-y*sin(x)^2"],
            SPHERE_BOX,
            H0="Lambda*(-y^2*cos(x)^2 + ln(tan(x/2)))",
            label="example4-original",
        ),
        1.0,
        "Sphere background with f = y cos x and a harmonic addition to H0",
        killing=_fields(D_U),
        potential=PotentialFunction.from_text("y*cos(x)", "sphere"),
    )
    transformed = CatalogEntry(
        "example4",
        WalkerMetric.build(
            [
                [f"exp(-2*Lambda*u)*sin(x)^2/(Lambda*(1 - {rho}^2))", 0],
                [0, f"exp(2*Lambda*u)*(1 - {rho}^2)/Lambda"],
            ],
            [0, 0],
            EXAMPLE4_BOX,
            H0=f"Lambda*(-y^2*exp(2*Lambda*u) + ln((1 - {rho})/(1 + {rho}))/2 - {rho}^2/(1 - {rho}^2))",
            label="example4",
        ),
        1.0,
        "Example 4 after removing A by the flow",
        killing=_fields(("0", "-Lambda*cot(x)", "-Lambda*y", "1")),
        det_T=parse(f"-Lambda^4*(4*y^2*cos(x)^2 + ({rho} + 2*v)^2)/(4*(1 - {rho}^2)^2)"),
        original="example4-original",
        transform=ClosedFormTransform.from_text(
            {"x": f"arccos({rho})", "y": "y*exp(Lambda*u)"}, label="example4"
        ),
        grid={"v": (-0.5, 0.5, 3), "x": (1.0, pi / 2, 3)},
        fixed={"y": 0.0, "u": 0.0},
        provenance=(
            "H0 carries -rho^2/(1 - rho^2) and exp(2 Lambda u); with the printed form the metric is not Einstein"
        ),
    )
    return [original, transformed]


def lewandowski_entries() -> list[CatalogEntry]:
    """Metrics built from the Killing forms of phi = 1, z and z^2."""
    specs = (
        ("lewandowski-phi-1", [1.0], -1.0),
        ("lewandowski-phi-z", [0.0, 1.0], 1.0),
        ("lewandowski-phi-z2", [0.0, 0.0, 1.0], 1.0),
    )
    return [
        CatalogEntry(
            name,
            lewandowski_metric(coefficients, lam, label=name),
            lam,
            f"Constant-curvature background with the Killing form of phi = {name.rsplit('-', 1)[1]}",
        )
        for name, coefficients, lam in specs
    ]


def builtin_entries() -> list[CatalogEntry]:
    return [*controls(), *example1(), *example2(), *example3(), *example4(), *lewandowski_entries()]


__all__ = [
    "UNIT_BOX",
    "EXAMPLE2_BOX",
    "EXAMPLE4_BOX",
    "LocusSpec",
    "CatalogEntry",
    "controls",
    "example1",
    "example2",
    "example3",
    "example4",
    "lewandowski_entries",
    "builtin_entries",
]
