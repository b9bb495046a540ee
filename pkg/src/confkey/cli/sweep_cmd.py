"""sweep: run every parameter point of a config and write the results CSV."""

from __future__ import annotations

import csv
import io
import logging
from pathlib import Path
from typing import Optional

import typer

from confkey.cli import EXIT_CONFIG, EXIT_IO, cli_error, console, require_config
from confkey.core.config import ExperimentConfig, csv_float
from confkey.core.errors import ConfkeyError
from confkey.core.logging_setup import configure_sweep_logging, detach_sweep_logging
from confkey.core.paths import sidecar_path
from confkey.simulator.experiment import ExperimentPoint, ExperimentResult, run_sweep

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "topology",
    "layout",
    "n_parties",
    "p",
    "q",
    "gamma",
    "strategy",
    "rounds",
    "seed",
    "mean_keyrate",
    "std_error",
    "trees_per_round",
)


def csv_row(
    config: ExperimentConfig, point: ExperimentPoint, result: ExperimentResult
) -> list[str]:
    return [
        config.topology.label(),
        config.layout.kind.value,
        str(point.n_parties),
        csv_float(config.params.p),
        csv_float(config.params.q),
        csv_float(point.gamma),
        point.strategy.value,
        str(result.rounds),
        str(point.seed),
        csv_float(result.mean_rate),
        csv_float(result.std_error),
        csv_float(result.trees_per_round_mean),
    ]


def render_csv(
    config: ExperimentConfig, rows: list[tuple[ExperimentPoint, ExperimentResult]]
) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for point, result in rows:
        writer.writerow(csv_row(config, point, result))
    return buffer.getvalue()


def sweep_command(
    config_path: Path = typer.Option(..., "--config", "-c", help="Experiment config file."),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Override output.path."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override sim.master_seed."),
    threads: Optional[int] = typer.Option(None, "--threads", "-j", help="Override sim.threads."),
) -> None:
    """Run the full sweep of a config and write one CSV row per parameter point."""
    config = require_config(config_path, seed=seed, out=out, threads=threads)
    path = config.output.path

    try:
        log_path = configure_sweep_logging(sidecar_path(path, ".log"))
    except OSError as exc:
        cli_error(f"Cannot open sweep log next to {path}: {exc.strerror}", EXIT_IO)

    try:
        logger.info("Sweep %s -> %s", config_path, path)
        try:
            rows = run_sweep(config)
        except ConfkeyError as exc:
            cli_error(f"Sweep failed: {exc}", EXIT_CONFIG)
        try:
            path.write_text(render_csv(config, rows), encoding="utf-8")
        except OSError as exc:
            cli_error(f"Cannot write {path}: {exc.strerror}", EXIT_IO)
        logger.info("Wrote %d row(s) to %s", len(rows), path)
    finally:
        detach_sweep_logging(log_path)

    console.print(f"[green]Wrote {len(rows)} row(s) to {path}[/green] [dim](log: {log_path})[/dim]")
