"""Routing strategies and plans.

Fixed strategies route once on the full network, scoring structures by their
expected rate times the probability that all of their links come up.
Dynamic strategies route afresh on every round's snapshot.
"""

from __future__ import annotations

import enum
import logging
from collections.abc import Sequence
from dataclasses import dataclass

from confkey.core.errors import ContractViolationError, InvalidArgumentError
from confkey.network.graph import Network, Snapshot
from confkey.routing.paths import CostGraph
from confkey.routing.stars import pack_stars_in
from confkey.routing.steiner import pack_trees_in
from confkey.routing.structures import Star, SteinerTree

logger = logging.getLogger(__name__)


class Strategy(str, enum.Enum):
    FIXED_SINGLE = "fixed-single"
    FIXED_MULTI = "fixed-multi"
    DYNAMIC_SINGLE = "dynamic-single"
    DYNAMIC_MULTI = "dynamic-multi"

    @property
    def is_fixed(self) -> bool:
        return self in (Strategy.FIXED_SINGLE, Strategy.FIXED_MULTI)

    @property
    def is_multi(self) -> bool:
        return self in (Strategy.FIXED_MULTI, Strategy.DYNAMIC_MULTI)


class StructureFamily(str, enum.Enum):
    AUTO = "auto"
    STAR = "star"
    TREE = "tree"

    def resolve(self, n_parties: int) -> StructureFamily:
        """``auto`` means stars for three parties and trees otherwise."""
        if self is not StructureFamily.AUTO:
            return self
        return StructureFamily.STAR if n_parties == 3 else StructureFamily.TREE


@dataclass(frozen=True)
class Plan:
    strategy: Strategy
    family: StructureFamily
    terminals: tuple[int, ...]
    structures: tuple[Star | SteinerTree, ...] = ()
    q: float | None = None

    def __post_init__(self) -> None:
        if self.structures and not self.strategy.is_fixed:
            raise ContractViolationError("dynamic plans route per round and carry no structures")
        seen: set = set()
        for structure in self.structures:
            if seen & structure.used_edges:
                raise ContractViolationError("planned structures must be edge-disjoint")
            seen |= structure.used_edges


def route_snapshot(
    snapshot: Snapshot,
    terminals: Sequence[int],
    *,
    multi: bool,
    family: StructureFamily = StructureFamily.AUTO,
    q: float | None = None,
    link_survival: bool = False,
) -> list[Star | SteinerTree]:
    """One structure, or a greedy edge-disjoint packing, on the alive links."""
    graph = CostGraph(snapshot, q, link_survival)
    limit = None if multi else 1
    if family.resolve(len(terminals)) is StructureFamily.STAR:
        return list(pack_stars_in(graph, terminals, limit))
    return list(pack_trees_in(graph, terminals, limit))


def plan_fixed(
    network: Network,
    terminals: Sequence[int],
    strategy: Strategy,
    q: float | None = None,
    family: StructureFamily = StructureFamily.AUTO,
) -> Plan:
    if not strategy.is_fixed:
        raise InvalidArgumentError(f"{strategy.value} is not a fixed strategy")
    structures = route_snapshot(
        Snapshot.full(network),
        terminals,
        multi=strategy.is_multi,
        family=family,
        q=q,
        link_survival=True,
    )
    if not structures:
        logger.warning("No structure connects terminals %s; the plan is empty", list(terminals))
    logger.debug("Fixed plan for %s: %d structure(s)", strategy.value, len(structures))
    return Plan(strategy, family, tuple(terminals), tuple(structures), q)


def plan_dynamic(
    terminals: Sequence[int],
    strategy: Strategy,
    q: float | None = None,
    family: StructureFamily = StructureFamily.AUTO,
) -> Plan:
    if strategy.is_fixed:
        raise InvalidArgumentError(f"{strategy.value} is not a dynamic strategy")
    return Plan(strategy, family, tuple(terminals), (), q)


def make_plan(
    network: Network,
    strategy: Strategy,
    q: float | None = None,
    family: StructureFamily = StructureFamily.AUTO,
) -> Plan:
    """Plan for the network's own terminals."""
    if strategy.is_fixed:
        return plan_fixed(network, network.terminals, strategy, q, family)
    return plan_dynamic(network.terminals, strategy, q, family)
