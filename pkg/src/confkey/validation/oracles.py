"""Self-checks comparing independent routes to the same quantities.

Each check returns a :class:`CheckResult`; ``confkey validate`` prints them
and fails when any check fails.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import networkx as nx
import numpy as np

from confkey.keyrate.rates import binary_entropy
from confkey.network.graph import Network, Snapshot
from confkey.quantum.closed_form import (
    error_rates_from_state,
    path_gamma,
    star_error_rates,
    star_fidelity,
)
from confkey.quantum.density import ghz_fidelity
from confkey.quantum.paulis import pauli_operator
from confkey.quantum.trees import tree_state, tree_state_full
from confkey.routing.contraction import ContractedTree, contract_tree
from confkey.routing.paths import CostGraph, PathRecord
from confkey.routing.structures import Star

logger = logging.getLogger(__name__)

TOLERANCE = 1e-10


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    max_deviation: float
    detail: str = ""


def _result(name: str, deviation: float, tol: float, detail: str) -> CheckResult:
    passed = bool(deviation <= tol)
    if not passed:
        logger.warning("Check %s failed: deviation %.3g > %.3g", name, deviation, tol)
    return CheckResult(name, passed, float(deviation), detail)


# ---------------------------------------------------------------------------
# Builders
# ---------------------------------------------------------------------------


def chain_star(arm_links: Sequence[Sequence[float]], q: float = 1.0) -> Star:
    """Star whose center is node 0 and whose arm i is a chain with the given link γ."""
    links: dict[tuple[int, int], tuple[float, float]] = {}
    terminals = []
    arm_nodes = []
    next_id = 1
    for gammas in arm_links:
        nodes = [0]
        for g in gammas:
            links[(nodes[-1], next_id)] = (1.0, g)
            nodes.append(next_id)
            next_id += 1
        terminals.append(nodes[-1])
        arm_nodes.append(tuple(reversed(nodes)))
    network = Network.from_links(next_id, links, q, terminals)
    graph = CostGraph(Snapshot.full(network))
    arms = tuple(graph.record(nodes) for nodes in arm_nodes)
    return Star(center=0, terminals=tuple(terminals), arms=arms, network=network)


def random_contracted_tree(rng: np.random.Generator, n_vertices: int) -> ContractedTree:
    """Random tree shape with every leaf and every degree-2 vertex a terminal."""
    g = nx.from_prufer_sequence(rng.integers(0, n_vertices, n_vertices - 2).tolist())
    terminals = [v for v in g if g.degree[v] <= 2]
    extra = [v for v in g if g.degree[v] > 2 and rng.random() < 0.3]
    order = [int(v) for v in rng.permutation(sorted(terminals + extra))]
    edges = tuple(
        PathRecord((min(u, v), max(u, v)), 1, float(rng.uniform(0.8, 1.0)), 0.0)
        for u, v in sorted(g.edges)
    )
    return ContractedTree(
        terminals=tuple(order),
        vertices=tuple(sorted(g)),
        contracted_edges=edges,
        fusion_nodes=frozenset(v for v in order if g.degree[v] >= 2),
    )


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------


def check_star_equivalence(
    draws: int = 100,
    seed: int = 0,
    path_gamma_fn: Callable[[Sequence[float]], float] = path_gamma,
) -> CheckResult:
    """Closed-form star error rates against the density-operator pipeline."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(draws):
        arm_links = [rng.uniform(0.5, 1.0, size=rng.integers(1, 3)).tolist() for _ in range(3)]
        star = chain_star(arm_links)
        state = tree_state(contract_tree(star.as_tree()))
        arm_gammas = [path_gamma_fn(links) for links in arm_links]
        for leader in range(3):
            closed = star_error_rates(
                arm_gammas[leader], [g for i, g in enumerate(arm_gammas) if i != leader]
            )
            measured = error_rates_from_state(state, leader)
            worst = max(
                worst,
                abs(closed.q_x - measured.q_x),
                *(abs(a - b) for a, b in zip(closed.q_ab, measured.q_ab)),
            )
    return _result("star closed form vs density operator", worst, TOLERANCE, f"{draws} draws")


def check_pauli_expansion(gammas: Sequence[float] = (0.9, 0.95, 0.99)) -> CheckResult:
    """Three-arm star state against its stabilizer expansion."""
    g1, g2, g3 = gammas
    expected = (
        pauli_operator("III")
        + g1 * g2 * pauli_operator("ZZI")
        + g2 * g3 * pauli_operator("IZZ")
        + g1 * g3 * pauli_operator("ZIZ")
        + g1 * g2 * g3
        * (
            pauli_operator("XXX")
            - pauli_operator("XYY")
            - pauli_operator("YXY")
            - pauli_operator("YYX")
        )
    ) / 8.0
    state = tree_state(contract_tree(chain_star([[g] for g in gammas]).as_tree()))
    deviation = float(np.max(np.abs(state.matrix - expected)))
    fidelity_gap = abs(ghz_fidelity(state) - star_fidelity(gammas))
    return _result(
        "3-GHZ Pauli expansion", max(deviation, fidelity_gap), TOLERANCE, f"gamma={tuple(gammas)}"
    )


def check_merge_order(trees: int = 10, seed: int = 1) -> CheckResult:
    """Incremental merging in shuffled orders against the full-tensor evolution."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trees):
        contracted = random_contracted_tree(rng, int(rng.integers(3, 7)))
        reference = tree_state_full(contracted).matrix
        for root in contracted.terminals:
            state = tree_state(contracted, root=root, rng=rng)
            worst = max(worst, float(np.max(np.abs(state.matrix - reference))))
    return _result("merge-order independence", worst, TOLERANCE, f"{trees} random trees")


def check_success_identity(stars: int = 50, seed: int = 2) -> CheckResult:
    """``q * prod(q^(l-1))`` equals ``q^(non-leaf count)`` for random arm lengths."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(stars):
        q = float(rng.uniform(0.5, 1.0))
        lengths = rng.integers(1, 7, size=3).tolist()
        star = chain_star([[1.0] * n for n in lengths])
        by_arms = q * math.prod(q ** (n - 1) for n in lengths)
        by_count = q**star.n_nonleaf
        worst = max(worst, abs(by_arms - by_count) / by_count)
    return _result("swap-success identity", worst, 1e-12, f"{stars} stars")


def check_entropy_endpoints() -> CheckResult:
    deviation = max(
        abs(binary_entropy(0.0)),
        abs(binary_entropy(1.0)),
        abs(binary_entropy(0.5) - 1.0),
    )
    return _result("entropy endpoints", deviation, 0.0, "H(0), H(1), H(1/2)")


def run_checks(
    *,
    draws: int = 100,
    seed: int = 0,
    path_gamma_fn: Callable[[Sequence[float]], float] = path_gamma,
) -> list[CheckResult]:
    """Run the whole suite; *path_gamma_fn* replaces the closed-form path product."""
    return [
        check_star_equivalence(draws, seed, path_gamma_fn),
        check_pauli_expansion(),
        check_merge_order(seed=seed + 1),
        check_success_identity(seed=seed + 2),
        check_entropy_endpoints(),
    ]
