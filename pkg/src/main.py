"""CLI entry point for the decoherence sweep studio."""

import logging
import sys
import time
from datetime import datetime
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Optional

import click
import pandas as pd

from src import __version__
from src.engine.models import NumericalInvariantError
from src.parsers.config_parser import ConfigParser
from src.reports.csv_report import CSVReportWriter, write_metadata
from src.reports.excel_report import SweepWorkbookGenerator
from src.studio.acceptance import ORACLE_DT, ORACLE_TOL, compare_with_oracle, run_acceptance
from src.studio.config import SweepConfig
from src.studio.recipes import figure_recipe, get_recipe, list_recipes, recipe_assumptions
from src.studio.sweep import SweepEngine

logger = logging.getLogger(__name__)


def _guarded(action: Callable[[], None], what: str) -> None:
    """Run a command body with the exit-code ladder: 1 bad input, 2 numerical failure."""
    try:
        action()
    except FileNotFoundError as e:
        click.echo(f"\n  ERROR: {e}", err=True)
        sys.exit(1)
    except ValueError as e:
        click.echo(f"\n  ERROR: {e}", err=True)
        sys.exit(1)
    except NumericalInvariantError as e:
        logger.exception("Numerical invariant violated during %s", what)
        click.echo(f"\n  NUMERICAL ERROR: {e}", err=True)
        sys.exit(2)
    except Exception as e:
        logger.exception("Unexpected error during %s", what)
        click.echo(f"\n  UNEXPECTED ERROR: {e}", err=True)
        sys.exit(2)


def _banner(title: str, err: bool = False) -> None:
    click.echo("=" * 60, err=err)
    click.echo(f"  {title}", err=err)
    click.echo("=" * 60, err=err)


def _collecting(frames: Iterator[pd.DataFrame], kept: List[pd.DataFrame]) -> Iterator[pd.DataFrame]:
    for frame in frames:
        kept.append(frame)
        yield frame


def _write_sweep(
    cfg: SweepConfig,
    out: Optional[str],
    workers: int,
    xlsx: Optional[str],
    recipe: Optional[str] = None,
) -> None:
    """
    Evaluate a config and write the CSV plus its metadata sidecar and optional workbook.

    Without ``out`` the CSV goes to stdout, progress goes to stderr and no
    sidecar is written.
    """
    streaming = out is None
    engine = SweepEngine(workers=workers)
    click.echo(f"\n  Sweeping {cfg.grid_size()} grid points with {workers} worker(s)...", err=streaming)

    started = datetime.now()
    clock = time.perf_counter()
    kept: List[pd.DataFrame] = []
    frames = engine.iter_frames(cfg)
    if xlsx:
        frames = _collecting(frames, kept)
    if streaming:
        output_path = None
        rows = CSVReportWriter().write(frames, sys.stdout)
        sys.stdout.flush()
    else:
        output_path, rows = CSVReportWriter().write_file(frames, out)
    elapsed = time.perf_counter() - clock

    metadata: Dict[str, object] = {
        "version": __version__,
        "recipe": recipe or "",
        "started": started.isoformat(timespec="seconds"),
        "elapsed_seconds": round(elapsed, 3),
        "workers": workers,
        "grid_points": cfg.grid_size(),
        "rows": rows,
        "max_decoherence_time": engine.max_decoherence_time(cfg),
        "config": ConfigParser().dump(cfg),
    }
    if recipe:
        for key, value in recipe_assumptions(recipe).items():
            metadata[f"assumption.{key}"] = value

    click.echo(f"   Wrote {rows} rows in {elapsed:.1f}s", err=streaming)
    if output_path is not None:
        meta_path = write_metadata(output_path, metadata)
        click.echo(f"\n  Output saved to:   {output_path.absolute()}")
        click.echo(f"  Metadata saved to: {meta_path.absolute()}")

    if xlsx:
        workbook = SweepWorkbookGenerator().generate(pd.concat(kept, ignore_index=True), metadata, xlsx)
        click.echo(f"  Workbook saved to: {workbook.absolute()}", err=streaming)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging.")
@click.version_option(__version__, prog_name="decoherence-studio")
def main(verbose: bool) -> None:
    """
    Decoherence Studio

    Two-qubit XYZ chains with Dz or Dx DM coupling under intrinsic
    decoherence: concurrence, two-copy teleportation and fidelity sweeps
    emitted as deterministic CSV.

    Example:
        python -m src.main figure fig2a --out fig2a.csv
    """
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
    )


@main.command()
@click.option("--config", "-c", "config_path", required=True, type=click.Path(),
              help="Path to a JSON sweep configuration or a .meta sidecar to replay.")
@click.option("--out", "-o", default=None, type=click.Path(),
              help="Path for the output CSV (default: write to stdout).")
@click.option("--workers", "-w", default=1, type=int, help="Worker processes (default: 1).")
@click.option("--xlsx", default=None, type=click.Path(), help="Also write an Excel workbook.")
def sweep(config_path: str, out: Optional[str], workers: int, xlsx: Optional[str]) -> None:
    """Run a sweep described by a configuration file or a recorded sidecar."""
    def action() -> None:
        _banner("PARAMETER SWEEP", err=out is None)
        click.echo(f"\n  Loading config: {config_path}...", err=out is None)
        cfg = ConfigParser().parse(Path(config_path))
        _write_sweep(cfg, out, workers, xlsx)

    _guarded(action, "sweep")


@main.command()
@click.argument("name")
@click.option("--out", "-o", default=None, type=click.Path(),
              help="Path for the output CSV (default: write to stdout).")
@click.option("--workers", "-w", default=1, type=int, help="Worker processes (default: 1).")
@click.option("--xlsx", default=None, type=click.Path(), help="Also write an Excel workbook.")
def figure(name: str, out: Optional[str], workers: int, xlsx: Optional[str]) -> None:
    """Reproduce a named figure as CSV (see `recipes`)."""
    def action() -> None:
        cfg = figure_recipe(name)
        _banner(f"FIGURE {name}: {get_recipe(name).description}", err=out is None)
        for key, value in recipe_assumptions(name).items():
            click.echo(f"   assumption {key}: {value}", err=out is None)
        _write_sweep(cfg, out, workers, xlsx, recipe=name)

    _guarded(action, f"figure {name}")


@main.command()
def recipes() -> None:
    """List the figure recipes."""
    for name in list_recipes():
        recipe = get_recipe(name)
        click.echo(f"  {name:<8} {recipe.config.grid_size():>8} points  {recipe.description}")


@main.command()
def check() -> None:
    """Run the acceptance suite."""
    def action() -> None:
        _banner("ACCEPTANCE SUITE")
        results = run_acceptance()
        for result in results:
            status = "PASS" if result.passed else "FAIL"
            click.echo(f"  [{status}] {result.criterion:>2}. {result.name}: {result.detail}")
        failed = [r for r in results if not r.passed]
        click.echo("=" * 60)
        click.echo(f"  {len(results) - len(failed)}/{len(results)} criteria passed")
        if failed:
            raise NumericalInvariantError(
                f"{len(failed)} acceptance criteria failed: "
                + ", ".join(str(r.criterion) for r in failed)
            )

    _guarded(action, "acceptance checks")


@main.command()
@click.option("--config", "-c", "config_path", required=True, type=click.Path(),
              help="Path to a JSON sweep configuration with a time axis.")
@click.option("--dt", default=ORACLE_DT, type=float, help=f"RK4 step (default: {ORACLE_DT:g}).")
@click.option("--tolerance", default=ORACLE_TOL, type=float,
              help=f"Largest allowed entrywise deviation (default: {ORACLE_TOL:g}).")
def oracle(config_path: str, dt: float, tolerance: float) -> None:
    """Compare the spectral propagator with RK4 over a config's grid."""
    def action() -> None:
        _banner("PROPAGATOR VS ODE ORACLE")
        if not tolerance > 0:
            raise ValueError(f"tolerance must be positive, got {tolerance}")
        cfg = ConfigParser().parse(Path(config_path))
        comparisons = compare_with_oracle(cfg, dt=dt, tolerance=tolerance)
        worst = max(c.deviation for c in comparisons)
        failed = [c for c in comparisons if not c.passed]
        click.echo(f"  Points compared:   {len(comparisons)}")
        click.echo(f"  Max deviation:     {worst:.3e}")
        click.echo(f"  Above tolerance:   {len(failed)}")
        if failed:
            raise NumericalInvariantError(
                f"{len(failed)} points deviate by more than {tolerance:g}"
            )

    _guarded(action, "oracle comparison")


if __name__ == "__main__":
    main()
