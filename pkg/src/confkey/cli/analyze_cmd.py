"""analyze-star: evaluate the three-party star formulas for given arm parameters."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import typer
from rich.table import Table

from confkey.cli import EXIT_CONFIG, cli_error, console, parse_floats, parse_ints
from confkey.core.errors import InvalidArgumentError
from confkey.keyrate.rates import LeaderChoice, expected_round_rate, select_leader
from confkey.quantum.closed_form import star_rates_by_leader


@dataclass(frozen=True)
class StarAnalysis:
    choice: LeaderChoice
    n_nonleaf: int
    r_round: float


def analyze_star(
    gamma_leader: float, gamma_bobs: list[float], q: float, lengths: list[int]
) -> StarAnalysis:
    """Closed-form rates of a star; party 0 is the arm given as the leader's."""
    if len(lengths) != len(gamma_bobs) + 1:
        raise InvalidArgumentError(
            f"{len(lengths)} arm lengths for {len(gamma_bobs) + 1} arms"
        )
    if any(n < 1 for n in lengths):
        raise InvalidArgumentError(f"arm lengths must be at least 1, got {lengths}")
    choice = select_leader(star_rates_by_leader([gamma_leader, *gamma_bobs]))
    n_nonleaf = 1 + sum(n - 1 for n in lengths)
    return StarAnalysis(choice, n_nonleaf, expected_round_rate(choice, q, n_nonleaf))


def _fmt(value: float) -> str:
    return format(value, ".10g")


def analyze_star_command(
    gamma_leader: float = typer.Option(..., "--gamma-leader", help="Path γ of party 0's arm."),
    gamma_bobs: str = typer.Option(
        ..., "--gamma-bobs", help="Comma-separated path γ of the other arms."
    ),
    q: float = typer.Option(1.0, "--q", help="Swap success probability per non-leaf node."),
    lengths: Optional[str] = typer.Option(
        None, "--lengths", help="Comma-separated link counts per arm, party 0 first."
    ),
) -> None:
    """Print Q_X, every Q_{A,B}, the chosen leader, r and the per-round rate."""
    bobs = parse_floats(gamma_bobs, "--gamma-bobs")
    arm_lengths = parse_ints(lengths, "--lengths") if lengths else [1] * (len(bobs) + 1)
    try:
        analysis = analyze_star(gamma_leader, bobs, q, arm_lengths)
    except (InvalidArgumentError, ValueError) as exc:
        cli_error(str(exc), EXIT_CONFIG)

    choice = analysis.choice
    table = Table(title="Star analysis")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("leader", str(choice.leader))
    table.add_row("Q_X", _fmt(choice.rates.q_x))
    bobs_of_leader = [i for i in range(len(bobs) + 1) if i != choice.leader]
    for bob, q_ab in zip(bobs_of_leader, choice.rates.q_ab):
        table.add_row(f"Q_A,B{bob}", _fmt(q_ab))
    table.add_row("r", _fmt(choice.r_clamped))
    table.add_row("r (unclamped)", _fmt(choice.r_asymptotic))
    table.add_row("non-leaf nodes", str(analysis.n_nonleaf))
    table.add_row("r_round", _fmt(analysis.r_round))
    console.print(table)
