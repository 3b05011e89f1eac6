"""
walkerverify command line interface.

Exit codes: 0 when the checked property holds, 1 on a residual failure and 2
on usage, loading or domain errors.
"""

import csv
import io
from enum import Enum
from pathlib import Path
from typing import Callable, Optional, TypeVar

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.table import Table

from .catalog import CatalogEntry, get_catalog, load_dsl, write_dsl
from .commands import default_start, run_check, run_classify, run_gauge_demo, run_killing
from .config import IntegratorConfig, ToleranceConfig, WalkerVerifyConfig, get_config
from .errors import WalkerVerifyError
from .models import CheckReport, ClassificationReport, GaugeDemoReport, KillingReport
from .utils.helpers import parse_grid
from .utils.logging import get_logger, setup_logging

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_ERROR = 2

DEFAULT_GAUGE_TOL = 1e-8

app = typer.Typer(
    name="walker-verify",
    help="Numerical verification of Einstein Walker metrics",
    add_completion=False,
    rich_markup_mode="rich",
)
console = Console()
err_console = Console(stderr=True)
logger = get_logger("cli")

T = TypeVar("T")


class OutputFormat(str, Enum):
    JSON = "json"
    TEXT = "text"
    CSV = "csv"


METRIC_ARGUMENT = typer.Argument(..., help="Catalog name or path to a YAML metric file")
LAMBDA_OPTION = typer.Option(None, "--lambda", "-l", help="Cosmological constant (defaults to the entry's)")
SAMPLES_OPTION = typer.Option(None, "--samples", "-n", min=1, help="Number of sampled points")
TOL_OPTION = typer.Option(None, "--tol", min=0.0, help="Pass/fail tolerance")
SEED_OPTION = typer.Option(None, "--seed", min=0, help="Base seed")
FORMAT_OPTION = typer.Option(OutputFormat.JSON, "--format", "-f", help="Output format", case_sensitive=False)
OUT_OPTION = typer.Option(None, "--out", "-o", help="Write the report to this file")
CONFIG_OPTION = typer.Option(None, "--config", "-c", help="Settings file (JSON or YAML)", exists=True, dir_okay=False)
VERBOSE_OPTION = typer.Option(False, "--verbose", "-v", help="Log progress")


def _settings(config_file: Optional[Path], verbose: bool) -> WalkerVerifyConfig:
    config = WalkerVerifyConfig.from_file(config_file) if config_file else get_config()
    setup_logging(config.logging, verbose=verbose)
    return config


def load_metric(source: str) -> CatalogEntry:
    """Catalog entry by name, or a metric file when ``source`` is an existing path."""
    catalog = get_catalog()
    if source in catalog:
        return catalog.get(source)
    path = Path(source)
    if path.suffix.lower() in (".yaml", ".yml") or path.exists():
        return load_dsl(path)
    return catalog.get(source)


def _guarded(action: Callable[[], T]) -> T:
    try:
        return action()
    except (WalkerVerifyError, ValidationError, ValueError) as e:
        err_console.print(f"[red]Error:[/red] {e}")
        details = getattr(e, "details", None)
        if details:
            logger.debug("Error details: %s", details)
        raise typer.Exit(EXIT_ERROR) from e


def _emit(text: str, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(text, nl=not text.endswith("\n"))
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    err_console.print(f"[green]Report written to {out}[/green]")


def _render(table: Table, out: Optional[Path]) -> None:
    if out is None:
        console.print(table)
        return
    buffer = Console(file=io.StringIO(), width=120, no_color=True)
    buffer.print(table)
    _emit(buffer.file.getvalue(), out)


def _tolerance(config: WalkerVerifyConfig, tol: Optional[float], field: str) -> ToleranceConfig:
    if tol is None:
        return config.tolerance
    return config.tolerance.model_copy(update={field: tol})


def check_table(report: CheckReport) -> Table:
    table = Table(title=f"{report.metric} (Lambda = {report.lam:g})")
    table.add_column("Residual", style="cyan")
    table.add_column("Value", style="white")
    table.add_row("einstein", f"{report.einstein_residual:.3e}")
    if report.scalar_trace is not None:
        table.add_row("scalar trace", f"{report.scalar_trace:.3e}")
    for name, value in report.symmetries.items():
        table.add_row(name, f"{value:.3e}")
    table.add_row("verdict", "[green]pass[/green]" if report.passed else "[red]fail[/red]")
    return table


def classification_csv(report: ClassificationReport) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["v", "x", "y", "u", "T11", "T12", "T21", "T22", "det_T", "type", "near_degenerate"])
    for row in report.rows:
        (t11, t12), (t21, t22) = row.T
        writer.writerow(
            [
                *(repr(row.point[c]) for c in ("v", "x", "y", "u")),
                *(repr(t) for t in (t11, t12, t21, t22)),
                repr(row.det_T),
                row.petrov_type.value,
                int(row.near_degenerate),
            ]
        )
    return buffer.getvalue()


def classification_summary(report: ClassificationReport) -> str:
    counts = {kind: sum(1 for r in report.rows if r.petrov_type.value == kind) for kind in ("II", "D")}
    parts = [f"{report.metric}: {counts['II']} II, {counts['D']} D", f"holonomy {report.holonomy.value}"]
    if report.rows and all(r.det_T < 0 for r in report.rows):
        parts.append("det T < 0 at all grid points")
    if report.holonomy_note:
        parts.append(report.holonomy_note)
    return "; ".join(parts)


def classification_table(report: ClassificationReport) -> Table:
    table = Table(title=f"{report.metric} (Lambda = {report.lam:g})", caption=classification_summary(report))
    for name in ("v", "x", "y", "u", "det T", "type"):
        table.add_column(name)
    for row in report.rows:
        table.add_row(
            *(f"{row.point[c]:.4g}" for c in ("v", "x", "y", "u")),
            f"{row.det_T:.4e}",
            row.petrov_type.value + (" (near)" if row.near_degenerate else ""),
        )
    return table


def killing_table(report: KillingReport) -> Table:
    table = Table(title=f"Killing fields of {report.metric}")
    table.add_column("Field", style="cyan")
    table.add_column("Residual")
    for name, value in zip(report.fields, report.residuals):
        table.add_row(name, f"{value:.3e}")
    verdict = "closed" if report.closed else "not closed"
    table.caption = f"{verdict}{', abelian' if report.abelian else ''}; Jacobi {report.jacobi_residual:.3e}"
    return table


def gauge_table(report: GaugeDemoReport) -> Table:
    table = Table(title=f"Flow of {report.metric} against the closed form")
    for name in ("u", "x", "y", "closed x", "closed y", "deviation"):
        table.add_column(name)
    for row in report.rows:
        table.add_row(
            f"{row.u:.4g}",
            f"{row.x:.10f}",
            f"{row.y:.10f}",
            f"{row.closed_x:.10f}",
            f"{row.closed_y:.10f}",
            f"{row.deviation:.3e}",
        )
    if report.round_trip is not None:
        table.caption = f"round trip {report.round_trip:.3e}"
    return table


@app.command()
def check(
    metric: str = METRIC_ARGUMENT,
    lam: Optional[float] = LAMBDA_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    tol: Optional[float] = TOL_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Einstein residual and curvature identities of a metric."""
    config = _settings(config_file, verbose)

    def action() -> CheckReport:
        return run_check(
            load_metric(metric),
            lam,
            samples or config.sampling.samples,
            config.sampling.seed if seed is None else seed,
            _tolerance(config, tol, "einstein"),
            config.threads,
        )

    report = _guarded(action)
    if output_format == OutputFormat.TEXT:
        _render(check_table(report), out)
    else:
        _emit(report.to_json(), out)
    raise typer.Exit(EXIT_PASS if report.passed else EXIT_FAIL)


@app.command()
def classify(
    metric: str = METRIC_ARGUMENT,
    lam: Optional[float] = LAMBDA_OPTION,
    grid: Optional[str] = typer.Option(None, "--grid", "-g", help='Grid such as "v=-1:1:5,x=0.5:1.5:3"'),
    fixed: Optional[str] = typer.Option(None, "--at", help='Values of the other coordinates, "y=0,u=0.1"'),
    samples: Optional[int] = SAMPLES_OPTION,
    tol: Optional[float] = TOL_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output_format: OutputFormat = typer.Option(OutputFormat.CSV, "--format", "-f", case_sensitive=False),
    out: Optional[Path] = OUT_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Petrov type over a grid and the holonomy verdict."""
    config = _settings(config_file, verbose)

    def action() -> ClassificationReport:
        at = {}
        for item in filter(None, (p.strip() for p in (fixed or "").split(","))):
            name, _, value = item.partition("=")
            at[name.strip()] = float(value)
        return run_classify(
            load_metric(metric),
            lam,
            parse_grid(grid) if grid else None,
            at,
            samples or config.sampling.samples,
            config.sampling.seed if seed is None else seed,
            _tolerance(config, tol, "det_t"),
        )

    report = _guarded(action)
    if output_format == OutputFormat.CSV:
        _emit(classification_csv(report), out)
        err_console.print(classification_summary(report))
    elif output_format == OutputFormat.TEXT:
        _render(classification_table(report), out)
    else:
        _emit(report.to_json(), out)


@app.command()
def killing(
    metric: str = METRIC_ARGUMENT,
    lam: Optional[float] = LAMBDA_OPTION,
    samples: Optional[int] = SAMPLES_OPTION,
    tol: Optional[float] = TOL_OPTION,
    seed: Optional[int] = SEED_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Certify the listed Killing fields and their bracket closure."""
    config = _settings(config_file, verbose)

    def action() -> KillingReport:
        return run_killing(
            load_metric(metric),
            lam,
            samples or config.sampling.samples,
            config.sampling.seed if seed is None else seed,
            _tolerance(config, tol, "killing"),
        )

    report = _guarded(action)
    if output_format == OutputFormat.TEXT:
        _render(killing_table(report), out)
    else:
        _emit(report.to_json(), out)
    raise typer.Exit(EXIT_PASS if report.passed else EXIT_FAIL)


@app.command("gauge-demo")
def gauge_demo(
    metric: str = METRIC_ARGUMENT,
    lam: Optional[float] = LAMBDA_OPTION,
    x0: Optional[float] = typer.Option(None, "--x0", help="Initial x"),
    y0: Optional[float] = typer.Option(None, "--y0", help="Initial y"),
    steps: int = typer.Option(5, "--steps", min=2, help="Number of u values"),
    tol: Optional[float] = TOL_OPTION,
    output_format: OutputFormat = FORMAT_OPTION,
    out: Optional[Path] = OUT_OPTION,
    config_file: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Integrate the flow removing A and compare it with the closed form."""
    config = _settings(config_file, verbose)

    def action() -> GaugeDemoReport:
        entry = load_metric(metric)
        start = None
        if x0 is not None or y0 is not None:
            dx, dy = default_start(entry)
            start = (dx if x0 is None else x0, dy if y0 is None else y0)
        integrator: IntegratorConfig = config.integrator
        return run_gauge_demo(entry, lam, start, steps, integrator=integrator)

    report = _guarded(action)
    if output_format == OutputFormat.TEXT:
        _render(gauge_table(report), out)
    else:
        _emit(report.to_json(), out)
    limit = DEFAULT_GAUGE_TOL if tol is None else tol
    raise typer.Exit(EXIT_PASS if report.max_deviation < limit else EXIT_FAIL)


@app.command("list")
def list_entries() -> None:
    """List the built-in metrics."""
    table = Table(title="Catalog")
    table.add_column("Name", style="cyan")
    table.add_column("Lambda")
    table.add_column("Description")
    for entry in get_catalog().entries():
        table.add_row(entry.name, f"{entry.lam:g}", entry.description)
    console.print(table)


@app.command()
def export(
    metric: str = typer.Argument(..., help="Catalog name"),
    out: Path = typer.Option(..., "--out", "-o", help="Destination YAML file"),
) -> None:
    """Write a catalog entry as a YAML metric file."""
    path = _guarded(lambda: write_dsl(get_catalog().get(metric), out))
    err_console.print(f"[green]Exported {metric} to {path}[/green]")


def main() -> None:
    app()


if __name__ == "__main__":
    main()
