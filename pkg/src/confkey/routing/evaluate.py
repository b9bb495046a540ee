"""Key-rate evaluation of stars and trees."""

from __future__ import annotations

import logging
import math
from functools import lru_cache

from confkey.core import settings
from confkey.core.errors import CapacityError, InvalidArgumentError
from confkey.keyrate.rates import KeyRateReport, LeaderChoice, build_report, select_leader
from confkey.quantum.closed_form import rates_by_leader_from_state, star_rates_by_leader
from confkey.quantum.trees import tree_state
from confkey.routing.contraction import ContractedTree, contract_tree
from confkey.routing.structures import Star, SteinerTree

logger = logging.getLogger(__name__)

TREE_CACHE_SIZE = 4096


def _star_choice(arm_gammas: tuple[float, ...]) -> LeaderChoice:
    return select_leader(star_rates_by_leader(arm_gammas))


@lru_cache(maxsize=TREE_CACHE_SIZE)
def _tree_choice(canonical: ContractedTree) -> LeaderChoice:
    state = tree_state(canonical)
    return select_leader(rates_by_leader_from_state(state))


def _swap_success(
    structure: Star | SteinerTree | ContractedTree,
    nonleaf: tuple[int, ...],
    q: float | None,
) -> float:
    if q is not None:
        if not 0.0 <= q <= 1.0:
            raise InvalidArgumentError(f"q must lie in [0, 1], got {q}")
        return q ** len(nonleaf)
    if structure.network is None:
        raise InvalidArgumentError("per-node q needs a structure tied to a network")
    return math.prod(structure.network.q(n) for n in nonleaf)


def evaluate_structure(
    structure: Star | SteinerTree | ContractedTree, q: float | None = None
) -> KeyRateReport:
    """Leader, error rates and expected per-round rate of one structure.

    Star-shaped structures use the closed form; other trees evolve a density
    operator. With *q* unset the swap success is the product of the node q
    over every non-leaf node.
    """
    n_terminals = len(structure.terminals)
    if n_terminals > settings.MAX_TERMINALS:
        raise CapacityError("terminal set", n_terminals, settings.MAX_TERMINALS)

    if isinstance(structure, Star):
        choice = _star_choice(structure.arm_gammas)
        nonleaf = structure.nonleaf_nodes
    else:
        contracted = (
            structure if isinstance(structure, ContractedTree) else contract_tree(structure, q)
        )
        if contracted.is_star:
            choice = _star_choice(contracted.arm_gammas())
        else:
            choice = _tree_choice(contracted.canonical())
        nonleaf = contracted.nonleaf_nodes
    return build_report(choice, _swap_success(structure, nonleaf, q), len(nonleaf))


def survival_probability(structure: Star | SteinerTree) -> float:
    """Probability that every link of *structure* is established in one round."""
    net = structure.network
    return math.prod(net.p(u, v) for u, v in structure.used_edges)


def structure_score(
    structure: Star | SteinerTree, q: float | None = None, *, link_survival: bool = False
) -> float:
    """Expected per-round rate, times the link survival probability when asked."""
    score = evaluate_structure(structure, q).r_round
    if link_survival:
        score *= survival_probability(structure)
    return score


def clear_tree_cache() -> None:
    _tree_choice.cache_clear()
