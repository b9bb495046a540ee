"""The three-phase round engine.

Phase 1 samples which links come up. Phase 2 routes on that snapshot
(dynamic strategies) or checks which planned structures survived (fixed
strategies). Phase 3 credits each structure with its key rate, either as
the expectation over swap outcomes or by flipping one q-coin per non-leaf
node.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from confkey.core.config import SwapMode
from confkey.core.errors import ContractViolationError
from confkey.keyrate.rates import KeyRateReport
from confkey.network.graph import Network, sample_snapshot
from confkey.routing.evaluate import evaluate_structure
from confkey.routing.planner import Plan, route_snapshot

logger = logging.getLogger(__name__)

ROUND_STREAM = 0


def round_rng(seed: int, round_index: int, stream: int = ROUND_STREAM) -> np.random.Generator:
    """Generator for one round, derived from ``(seed, stream, round)`` only."""
    return np.random.default_rng(np.random.SeedSequence([seed, stream, round_index]))


@dataclass(frozen=True)
class RoundResult:
    """Outcome of one round.

    ``rate`` is the sum of per-structure expected rates under analytic swaps
    and the realized rate under Monte Carlo swaps.
    """

    structures_found: int
    rate: float
    per_structure: tuple[KeyRateReport, ...]
    swap_mode: SwapMode = SwapMode.ANALYTIC

    def __post_init__(self) -> None:
        if self.rate < 0.0:
            raise ContractViolationError(f"round rate {self.rate} is negative")

    @property
    def expected_rate(self) -> float:
        return sum(report.r_round for report in self.per_structure)


def run_round(
    network: Network,
    plan: Plan,
    rng: np.random.Generator,
    swap_mode: SwapMode = SwapMode.ANALYTIC,
) -> RoundResult:
    snapshot = sample_snapshot(network, rng)

    if plan.strategy.is_fixed:
        structures = [s for s in plan.structures if s.used_edges <= snapshot.alive_links]
    else:
        structures = route_snapshot(
            snapshot,
            plan.terminals,
            multi=plan.strategy.is_multi,
            family=plan.family,
            q=plan.q,
        )

    reports = tuple(evaluate_structure(s, plan.q) for s in structures)
    if swap_mode is SwapMode.ANALYTIC:
        rate = sum(report.r_round for report in reports)
    else:
        rate = 0.0
        for structure, report in zip(structures, reports):
            qs = np.array(
                [plan.q if plan.q is not None else network.q(n) for n in structure.nonleaf_nodes]
            )
            if np.all(rng.random(len(qs)) < qs):
                rate += report.r_clamped

    logger.debug(
        "Round: %d alive links, %d structure(s), rate %.6g",
        len(snapshot.alive_links),
        len(structures),
        rate,
    )
    return RoundResult(len(structures), float(rate), reports, swap_mode)
