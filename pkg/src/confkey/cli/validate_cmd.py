"""validate: run the built-in consistency checks."""

from __future__ import annotations

import typer
from rich.table import Table

from confkey.cli import EXIT_VALIDATION, cli_error, console
from confkey.validation.oracles import run_checks


def validate_command(
    draws: int = typer.Option(100, "--draws", min=1, help="Random star draws to compare."),
    seed: int = typer.Option(0, "--seed", help="Seed of the random draws."),
) -> None:
    """Cross-check closed forms, the density-operator pipeline and the rate identities."""
    results = run_checks(draws=draws, seed=seed)

    table = Table(title="Validation")
    table.add_column("Check", style="cyan")
    table.add_column("Result")
    table.add_column("Max deviation", justify="right")
    table.add_column("Detail", style="dim")
    for result in results:
        status = "[green]PASS[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, status, f"{result.max_deviation:.3e}", result.detail)
    console.print(table)

    failed = [r.name for r in results if not r.passed]
    if failed:
        cli_error(f"{len(failed)} check(s) failed: {', '.join(failed)}", EXIT_VALIDATION)
    console.print(f"[green]All {len(results)} checks passed.[/green]")
