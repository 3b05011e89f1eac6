"""
Report builders behind the command line.

Each function takes a catalog entry and the run settings and returns one of
the report models; nothing here prints or exits.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from .catalog import CatalogEntry, get_catalog
from .classify import classify_grid, holonomy_verdict, identity_residuals, petrov_locus_root
from .config import DEFAULT_SEED, IntegratorConfig, ToleranceConfig
from .errors import PreconditionError
from .geometry import curvature_batch, max_residual, sample_metric_points, scalar_trace_residual, symmetry_residuals
from .gauge import compare_flow_with_closed_form, flow_transform_for
from .killing import algebra_certificate
from .models import CheckReport, ClassificationReport, GaugeDemoReport, GaugeDemoRow, KillingReport
from .utils.logging import get_logger
from .walker import assemble, reduced_system_residuals

logger = get_logger(__name__)

# Points used for the curvature identity and reduced-system diagnostics.
DIAGNOSTIC_SAMPLES = 50


def resolve_lambda(entry: CatalogEntry, lam: Optional[float]) -> float:
    return entry.lam if lam is None else float(lam)


def run_check(
    entry: CatalogEntry,
    lam: Optional[float] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    tolerance: Optional[ToleranceConfig] = None,
    threads: int = 1,
) -> CheckReport:
    """
    Einstein residual with curvature identity diagnostics.

    The verdict depends on the Einstein residual only; the other residuals
    are reported alongside.
    """
    tolerance = tolerance or ToleranceConfig()
    value = resolve_lambda(entry, lam)
    params = entry.params(value)
    metric = assemble(entry.metric)
    worst = max_residual(metric, value, entry.box, n, seed, params, threads, tolerance)

    m = min(n, DIAGNOSTIC_SAMPLES)
    env = sample_metric_points(metric, entry.box, m, seed, params)
    batch = curvature_batch(metric, env, params, tolerance)
    symmetries = dict(symmetry_residuals(batch))
    if entry.reduced and value != 0:
        reduced = reduced_system_residuals(entry.metric, value, entry.box, m, seed, params, tolerance)
        symmetries["reduced.poisson"] = reduced.poisson
        symmetries["reduced.divergence"] = max(reduced.divergence)
        symmetries["reduced.trace"] = reduced.trace
        symmetries["reduced.einstein"] = reduced.einstein
        identities = identity_residuals(entry.metric, value, env, params, tolerance)
        symmetries.update({f"identity.{k}": v for k, v in identities.residuals.items()})

    return CheckReport(
        metric=entry.name,
        lam=value,
        samples=n,
        seed=seed,
        einstein_residual=worst.value,
        witness=worst.point.as_dict(),
        symmetries=symmetries,
        scalar_trace=scalar_trace_residual(batch, value),
        tolerance=tolerance.einstein,
        passed=worst.value < tolerance.einstein,
    )


def run_classify(
    entry: CatalogEntry,
    lam: Optional[float] = None,
    grid: Optional[dict[str, tuple[float, float, int]]] = None,
    fixed: Optional[dict[str, float]] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    tolerance: Optional[ToleranceConfig] = None,
) -> ClassificationReport:
    """
    Petrov types over a grid and the sampled holonomy verdict.

    Without ``grid`` the entry's default grid is used; coordinates missing
    from the grid take the entry's fixed values.
    """
    value = resolve_lambda(entry, lam)
    params = entry.params(value)
    grid = dict(grid or entry.grid)
    if not grid:
        raise PreconditionError(f"No grid given and '{entry.name}' has no default grid", error_code="grid")
    fixed = {**entry.fixed, **(fixed or {})}
    fixed = {k: v for k, v in fixed.items() if k not in grid}
    rows = classify_grid(entry.metric, value, grid, fixed, params, tolerance)
    verdict = holonomy_verdict(entry.metric, value, entry.box, n, seed, params, tolerance)
    locus = []
    if entry.locus is not None:
        spec = entry.locus
        locus.append(
            petrov_locus_root(entry.metric, value, spec.base, spec.coordinate, spec.bracket, params, tolerance)
        )
    return ClassificationReport(
        metric=entry.name,
        lam=value,
        rows=rows,
        holonomy=verdict.holonomy,
        holonomy_note=verdict.note,
        locus=locus,
    )


def run_killing(
    entry: CatalogEntry,
    lam: Optional[float] = None,
    n: int = 200,
    seed: int = DEFAULT_SEED,
    tolerance: Optional[ToleranceConfig] = None,
) -> KillingReport:
    """Certify the entry's Killing list."""
    tolerance = tolerance or ToleranceConfig()
    if not entry.killing:
        raise PreconditionError(f"'{entry.name}' lists no Killing fields", error_code="killing")
    value = resolve_lambda(entry, lam)
    certificate = algebra_certificate(
        assemble(entry.metric),
        entry.killing,
        entry.box,
        n,
        seed,
        entry.params(value),
        killing_tol=tolerance.killing,
    )
    return KillingReport(
        metric=entry.name,
        fields=certificate.labels,
        residuals=certificate.killing_residuals,
        structure_constants=certificate.structure_constants,
        bracket_residuals=[b.residual for b in certificate.brackets],
        jacobi_residual=certificate.jacobi_residual,
        closed=certificate.closed,
        abelian=certificate.abelian,
        passed=certificate.passed,
    )


def default_start(entry: CatalogEntry) -> tuple[float, float]:
    """A quarter of the way into the x interval, centred in y."""
    x_lo, x_hi = entry.box.interval("x")
    y_lo, y_hi = entry.box.interval("y")
    return x_lo + 0.25 * (x_hi - x_lo), 0.5 * (y_lo + y_hi)


def run_gauge_demo(
    entry: CatalogEntry,
    lam: Optional[float] = None,
    start: Optional[tuple[float, float]] = None,
    steps: int = 5,
    u0: float = 0.0,
    integrator: Optional[IntegratorConfig] = None,
) -> GaugeDemoReport:
    """
    Integrate the flow removing A from an ``-original`` entry and compare it
    with the closed-form transformation stored on its transformed partner.

    Raises:
        PreconditionError: No catalog entry names ``entry`` as its original
    """
    partners = [e for e in get_catalog().entries() if e.original == entry.name and e.transform is not None]
    if not partners:
        raise PreconditionError(f"No closed-form transformation is known for '{entry.name}'", error_code="gauge")
    partner = partners[0]
    value = resolve_lambda(entry, lam)
    params = entry.params(value)
    x0, y0 = start or default_start(entry)
    u_lo, u_hi = entry.box.interval("u")
    u = np.linspace(u_lo, u_hi, steps)
    flow = flow_transform_for(entry.metric, u0, integrator)
    comparison = compare_flow_with_closed_form(flow, partner.transform, x0, y0, u, params)
    deviation = comparison.deviation
    rows = [
        GaugeDemoRow(
            u=float(u[i]),
            x=float(comparison.flow_x[i]),
            y=float(comparison.flow_y[i]),
            closed_x=float(comparison.closed_x[i]),
            closed_y=float(comparison.closed_y[i]),
            deviation=float(deviation[i]),
        )
        for i in range(len(u))
    ]
    logger.info("Gauge demo of %s against %s: max deviation %.3e", entry.name, partner.name, comparison.max_deviation)
    return GaugeDemoReport(
        metric=entry.name,
        lam=value,
        start={"x": float(x0), "y": float(y0), "u": float(u0)},
        rows=rows,
        max_deviation=comparison.max_deviation,
        round_trip=comparison.round_trip,
        extra={"transformed": partner.name},
    )


__all__ = [
    "DIAGNOSTIC_SAMPLES",
    "resolve_lambda",
    "run_check",
    "run_classify",
    "run_killing",
    "default_start",
    "run_gauge_demo",
]
