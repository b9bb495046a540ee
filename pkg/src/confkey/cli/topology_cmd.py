"""generate-topology: build the network a config describes and dump it."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer

from confkey.cli import EXIT_CONFIG, EXIT_IO, cli_error, console, require_config
from confkey.core.errors import ConfkeyError
from confkey.network.serialize import dump_network, write_network
from confkey.simulator.experiment import ExperimentPoint, point_network


def generate_topology_command(
    config_path: Path = typer.Option(..., "--config", "-c", help="Experiment config file."),
    out: Optional[Path] = typer.Option(
        None, "--out", "-o", help="Write the network here instead of stdout."
    ),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override sim.master_seed."),
) -> None:
    """Generate the first topology seed of a config with its first γ and party count."""
    config = require_config(config_path, seed=seed)
    point = ExperimentPoint(
        seed=config.sim.master_seed,
        strategy=config.routing.strategy[0],
        gamma=config.params.gamma_list[0],
        n_parties=config.protocol.n_parties[0],
    )
    try:
        network = point_network(config, point)
    except ConfkeyError as exc:
        cli_error(f"Cannot generate topology: {exc}", EXIT_CONFIG)

    if out is None:
        typer.echo(dump_network(network), nl=False)
        return
    try:
        write_network(network, out)
    except OSError as exc:
        cli_error(f"Cannot write {out}: {exc.strerror}", EXIT_IO)
    console.print(
        f"[green]Wrote {config.topology.label()}[/green] "
        f"({network.n_nodes} nodes, {len(network.links)} links, "
        f"mean degree {network.mean_degree():.3f}, terminals {list(network.terminals)}) "
        f"to {out}"
    )
