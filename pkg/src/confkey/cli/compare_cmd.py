"""compare: paired comparison of the routing strategies listed in a config."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer
from rich.table import Table

from confkey.cli import EXIT_CONFIG, cli_error, console, require_config
from confkey.core.errors import ConfkeyError
from confkey.simulator.experiment import StrategyComparison, compare_strategies


def _histogram(histogram: dict[int, int]) -> str:
    return " ".join(f"{count}:{rounds}" for count, rounds in histogram.items())


def render_comparison(comparison: StrategyComparison) -> tuple[Table, Table]:
    results = Table(title="Strategies")
    results.add_column("Strategy", style="cyan")
    results.add_column("Mean rate", justify="right")
    results.add_column("Std error", justify="right")
    results.add_column("Structures/round", justify="right")
    results.add_column("Histogram (structures:rounds)", style="dim")
    for strategy, result in comparison.results.items():
        results.add_row(
            strategy.value,
            f"{result.mean_rate:.6g}",
            f"{result.std_error:.3g}",
            f"{result.trees_per_round_mean:.4g}",
            _histogram(result.structure_histogram),
        )

    ratios = Table(title=f"Ratios against {comparison.baseline.value}")
    ratios.add_column("Strategy", style="cyan")
    ratios.add_column("Ratio", justify="right")
    ratios.add_column("Std error", justify="right")
    for row in comparison.ratios:
        ratios.add_row(row.numerator.value, f"{row.ratio:.4f}", f"{row.std_error:.3g}")
    return results, ratios


def compare_command(
    config_path: Path = typer.Option(..., "--config", "-c", help="Experiment config file."),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override sim.master_seed."),
    threads: Optional[int] = typer.Option(None, "--threads", "-j", help="Override sim.threads."),
) -> None:
    """Run every configured strategy on the same snapshots for the first γ and party count."""
    config = require_config(config_path, seed=seed, threads=threads)
    if len(config.routing.strategy) < 2:
        cli_error("compare needs at least two strategies in routing.strategy", EXIT_CONFIG)
    try:
        comparison = compare_strategies(config)
    except ConfkeyError as exc:
        cli_error(f"Comparison failed: {exc}", EXIT_CONFIG)

    console.print(
        f"[bold]{config.topology.label()}[/bold] layout={config.layout.kind.value} "
        f"N={config.protocol.n_parties[0]} gamma={config.params.gamma_list[0]:g} "
        f"p={config.params.p:g} q={config.params.q:g} rounds/seed={config.sim.rounds}"
    )
    for table in render_comparison(comparison):
        console.print(table)
