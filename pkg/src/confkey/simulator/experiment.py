"""Experiments: many rounds per parameter point, sweeps and paired comparisons.

Every round of topology seed ``s`` draws from ``round_rng(s, round)``, which
does not depend on the strategy, γ or party count. Runs that differ only in
those see identical link snapshots, so their per-round rates are paired.
"""

from __future__ import annotations

import collections
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache, partial
from typing import Any

import numpy as np

from confkey.core.config import ExperimentConfig, TopologyConfig, TopologyKind
from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Network, build_grid, build_random_geometric
from confkey.network.layouts import apply_layout
from confkey.routing.planner import Strategy, make_plan
from confkey.simulator.engine import round_rng, run_round

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ExperimentPoint:
    seed: int
    strategy: Strategy
    gamma: float
    n_parties: int


@dataclass(frozen=True)
class ExperimentResult:
    mean_rate: float
    std_error: float
    rounds: int
    trees_per_round_mean: float
    structure_histogram: dict[int, int]
    config_echo: dict[str, Any] = field(compare=False, repr=False)
    round_rates: tuple[float, ...] = field(default=(), repr=False)

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise InvalidArgumentError("an experiment needs at least one round")
        if self.std_error < 0.0:
            raise InvalidArgumentError(f"negative standard error {self.std_error}")

    @classmethod
    def from_rounds(
        cls, rates: list[float], counts: list[int], echo: dict[str, Any]
    ) -> ExperimentResult:
        arr = np.asarray(rates, dtype=float)
        n = len(arr)
        std_error = float(arr.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        return cls(
            mean_rate=float(arr.mean()),
            std_error=std_error,
            rounds=n,
            trees_per_round_mean=float(np.mean(counts)),
            structure_histogram=dict(sorted(collections.Counter(counts).items())),
            config_echo=echo,
            round_rates=tuple(float(r) for r in arr),
        )


# ---------------------------------------------------------------------------
# Networks
# ---------------------------------------------------------------------------


@lru_cache(maxsize=64)
def build_network(topology: TopologyConfig, seed: int, p: float, q: float, gamma: float) -> Network:
    """Topology of one graph seed with uniform link and node parameters."""
    if topology.kind is TopologyKind.GRID:
        return build_grid(topology.width, topology.height, p, gamma, q)
    return build_random_geometric(topology.n_nodes, topology.radius, p, gamma, q, seed)


def point_network(config: ExperimentConfig, point: ExperimentPoint) -> Network:
    network = build_network(
        config.topology, point.seed, config.params.p, config.params.q, point.gamma
    )
    return apply_layout(network, config.layout_spec(point.n_parties), seed=point.seed)


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------


def _run_rounds(config: ExperimentConfig, point: ExperimentPoint) -> tuple[list[float], list[int]]:
    network = point_network(config, point)
    plan = make_plan(network, point.strategy, family=config.routing.structure)
    rates, counts = [], []
    for r in range(config.sim.rounds):
        result = run_round(network, plan, round_rng(point.seed, r), config.sim.swap_mode)
        rates.append(result.rate)
        counts.append(result.structures_found)
    return rates, counts


def _echo(config: ExperimentConfig, **point: Any) -> dict[str, Any]:
    echo = config.model_dump(mode="json")
    echo["point"] = {k: (v.value if isinstance(v, Strategy) else v) for k, v in point.items()}
    return echo


def run_point(config: ExperimentConfig, point: ExperimentPoint) -> ExperimentResult:
    """All rounds of one topology seed at one parameter point."""
    rates, counts = _run_rounds(config, point)
    logger.info(
        "seed=%s strategy=%s gamma=%s N=%s mean=%.6g",
        point.seed,
        point.strategy.value,
        point.gamma,
        point.n_parties,
        float(np.mean(rates)),
    )
    return ExperimentResult.from_rounds(
        rates,
        counts,
        _echo(
            config,
            seed=point.seed,
            strategy=point.strategy,
            gamma=point.gamma,
            n_parties=point.n_parties,
        ),
    )


def _map(config: ExperimentConfig, fn, items: list) -> list:
    """Apply *fn* over *items* on the configured thread pool, keeping input order."""
    if config.sim.threads <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=config.sim.threads) as pool:
        return list(pool.map(fn, items))


def run_experiment(
    config: ExperimentConfig,
    *,
    strategy: Strategy | None = None,
    gamma: float | None = None,
    n_parties: int | None = None,
) -> ExperimentResult:
    """Rounds of every graph seed pooled into one result.

    Unset parameters take the first value listed in the config.
    """
    strategy = strategy or config.routing.strategy[0]
    gamma = config.params.gamma_list[0] if gamma is None else gamma
    n_parties = n_parties or config.protocol.n_parties[0]
    points = [ExperimentPoint(s, strategy, gamma, n_parties) for s in config.topology_seeds()]
    logger.info(
        "Experiment %s on %s: %d seed(s) x %d rounds",
        strategy.value,
        config.topology.label(),
        len(points),
        config.sim.rounds,
    )

    per_seed = _map(config, partial(_run_rounds, config), points)
    rates = [r for seed_rates, _ in per_seed for r in seed_rates]
    counts = [c for _, seed_counts in per_seed for c in seed_counts]
    echo = _echo(
        config,
        seeds=config.topology_seeds(),
        strategy=strategy,
        gamma=gamma,
        n_parties=n_parties,
    )
    return ExperimentResult.from_rounds(rates, counts, echo)


def sweep_points(config: ExperimentConfig) -> list[ExperimentPoint]:
    """Sweep order: topology seed, then strategy, then γ, then party count."""
    return [
        ExperimentPoint(seed, strategy, gamma, n)
        for seed in config.topology_seeds()
        for strategy in config.routing.strategy
        for gamma in config.params.gamma_list
        for n in config.protocol.n_parties
    ]


def run_sweep(config: ExperimentConfig) -> list[tuple[ExperimentPoint, ExperimentResult]]:
    points = sweep_points(config)
    logger.info("Sweep of %d point(s) on %d thread(s)", len(points), config.sim.threads)
    results = _map(config, partial(run_point, config), points)
    return list(zip(points, results))


# ---------------------------------------------------------------------------
# Paired comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatioRow:
    numerator: Strategy
    denominator: Strategy
    ratio: float
    std_error: float


@dataclass(frozen=True)
class StrategyComparison:
    results: dict[Strategy, ExperimentResult]
    ratios: tuple[RatioRow, ...]

    @property
    def baseline(self) -> Strategy:
        return next(iter(self.results))


def paired_ratio(numerator: np.ndarray, denominator: np.ndarray) -> tuple[float, float]:
    """Ratio of means with its delta-method standard error over paired rounds."""
    n = len(numerator)
    mean_a, mean_b = float(numerator.mean()), float(denominator.mean())
    if mean_b == 0.0:
        return math.nan, math.nan
    ratio = mean_a / mean_b
    if n < 2:
        return ratio, 0.0
    cov = np.cov(numerator, denominator, ddof=1)
    var = (
        cov[0, 0] / mean_b**2
        + mean_a**2 * cov[1, 1] / mean_b**4
        - 2.0 * mean_a * cov[0, 1] / mean_b**3
    ) / n
    return ratio, math.sqrt(max(0.0, float(var)))


def compare_strategies(
    config: ExperimentConfig,
    strategies: list[Strategy] | None = None,
    *,
    gamma: float | None = None,
    n_parties: int | None = None,
) -> StrategyComparison:
    """Run each strategy on the same snapshot sequence and compare against the first."""
    strategies = list(strategies or config.routing.strategy)
    if len(set(strategies)) != len(strategies):
        raise InvalidArgumentError("strategies to compare must be distinct")
    results = {
        s: run_experiment(config, strategy=s, gamma=gamma, n_parties=n_parties)
        for s in strategies
    }
    base = strategies[0]
    base_rates = np.asarray(results[base].round_rates)
    rows = []
    for s in strategies[1:]:
        ratio, se = paired_ratio(np.asarray(results[s].round_rates), base_rates)
        rows.append(RatioRow(s, base, ratio, se))
    return StrategyComparison(results, tuple(rows))
