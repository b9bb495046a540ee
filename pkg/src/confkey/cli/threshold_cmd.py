"""threshold: smallest uniform arm γ that still yields a key."""

from __future__ import annotations

import typer

from confkey.cli import EXIT_CONFIG, cli_error, console
from confkey.core import settings
from confkey.keyrate.rates import min_uniform_gamma


def threshold_command(
    parties: int = typer.Option(..., "--parties", "-n", help="Number of parties N."),
    q: float = typer.Option(1.0, "--q", min=0.0, max=1.0, help="Swap success per node."),
    length: int = typer.Option(1, "--length", min=1, help="Links per arm."),
) -> None:
    """Print the γ threshold of an N-arm star with arms of equal length."""
    if not 2 <= parties <= settings.MAX_TERMINALS:
        cli_error(f"--parties must lie in 2..{settings.MAX_TERMINALS}", EXIT_CONFIG)
    gamma_arm = min_uniform_gamma(parties)
    gamma_link = gamma_arm ** (1.0 / length)
    n_nonleaf = 1 + parties * (length - 1)

    console.print(f"parties          {parties}")
    console.print(f"arm gamma        {gamma_arm:.10g}")
    console.print(f"link gamma       {gamma_link:.10g}  ({length} link(s) per arm)")
    console.print(f"swap success     {q**n_nonleaf:.10g}  ({n_nonleaf} non-leaf node(s))")
