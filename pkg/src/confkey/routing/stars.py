"""Best-star search and greedy star packing.

Every node is tried as the center. For each center the arms are routed one
terminal at a time in several orders, each arm avoiding the links and
repeaters already claimed and never passing through another terminal. The
winner maximizes the expected per-round key rate.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence

import networkx as nx

from confkey.core.errors import InvalidArgumentError
from confkey.keyrate.rates import select_leader
from confkey.network.graph import Snapshot
from confkey.quantum.closed_form import star_rates_by_leader
from confkey.routing.contraction import contract_tree
from confkey.routing.evaluate import structure_score
from confkey.routing.paths import CostGraph, PathRecord
from confkey.routing.steiner import best_tree_in
from confkey.routing.structures import Star, SteinerTree

logger = logging.getLogger(__name__)

SCORE_DIGITS = 12
BOUND_SLACK = 1e-9
MAX_FULL_PERMUTATIONS = 4


def _orderings(n: int) -> list[tuple[int, ...]]:
    """All arm orders for up to four terminals, otherwise the n rotations."""
    idx = tuple(range(n))
    if n <= MAX_FULL_PERMUTATIONS:
        return list(itertools.permutations(idx))
    return [idx[i:] + idx[:i] for i in range(n)]


def _candidate_key(star: Star, score: float) -> tuple:
    return (-round(score, SCORE_DIGITS), star.center, tuple(arm.nodes for arm in star.arms))


# ---------------------------------------------------------------------------
# Upper bounds
# ---------------------------------------------------------------------------


def _alive_graph(graph: CostGraph) -> nx.Graph:
    net = graph.network
    g = nx.Graph()
    g.add_nodes_from(range(net.n_nodes))
    for u, v in graph.snapshot.alive_links:
        if math.isfinite(graph.costs[(u, v)]):
            g.add_edge(u, v)
    return g


def _center_bounds(graph: CostGraph, terminals: tuple[int, ...]) -> dict[int, float]:
    """Score upper bound per reachable center, ignoring arm disjointness."""
    net = graph.network
    alive = _alive_graph(graph)
    term_set = set(terminals)

    def blocked(t: int, u: int) -> bool:
        return u in term_set and u != t

    gamma_dist: list[dict[int, float]] = []
    success_dist: list[dict[int, float]] = []
    for t in terminals:

        def gamma_weight(u, v, _data, t=t):
            return None if blocked(t, u) else -math.log(net.gamma(u, v))

        def success_weight(u, v, _data, t=t):
            q = graph.node_q(v)
            if blocked(t, u) or q == 0.0:
                return None
            cost = -math.log(q)
            if graph.link_survival:
                cost -= math.log(net.p(u, v))
            return cost

        gamma_dist.append(nx.single_source_dijkstra_path_length(alive, t, weight=gamma_weight))
        success_dist.append(nx.single_source_dijkstra_path_length(alive, t, weight=success_weight))

    bounds = {}
    for c in range(net.n_nodes):
        q_c = graph.node_q(c)
        if q_c == 0.0 or any(c not in d for d in gamma_dist + success_dist):
            continue
        arm_gammas = []
        success = q_c
        for t, g_d, s_d in zip(terminals, gamma_dist, success_dist):
            if t == c:
                arm_gammas.append(1.0)
                continue
            arm_gammas.append(min(1.0, math.exp(-g_d[c])))
            success *= min(1.0, math.exp(-(s_d[c] + math.log(q_c))))
        r = select_leader(star_rates_by_leader(arm_gammas)).r_clamped
        bounds[c] = success * r
    return bounds


# ---------------------------------------------------------------------------
# Search
# ---------------------------------------------------------------------------


def _stars_at(graph: CostGraph, terminals: tuple[int, ...], center: int) -> list[Star]:
    """Distinct feasible stars at *center*, one per successful arm order."""
    prefixes: dict[tuple[int, ...], tuple[dict[int, PathRecord], frozenset, frozenset] | None] = {
        (): ({}, frozenset(), frozenset(t for t in terminals if t != center))
    }
    stars: dict[tuple, Star] = {}
    for order in _orderings(len(terminals)):
        state = None
        for depth in range(1, len(order) + 1):
            prefix = order[:depth]
            if prefix in prefixes:
                state = prefixes[prefix]
                if state is None:
                    break
                continue
            arms, used, banned = prefixes[prefix[:-1]]
            i = prefix[-1]
            t = terminals[i]
            if t == center:
                path = graph.record((t,))
            else:
                path = graph.shortest_path(t, center, banned_nodes=banned, banned_edges=used)
            if path is None:
                prefixes[prefix] = state = None
                break
            state = (
                {**arms, i: path},
                used | frozenset(path.edges),
                banned | frozenset(path.interior),
            )
            prefixes[prefix] = state
        if state is None:
            continue
        arms = state[0]
        star = Star(
            center=center,
            terminals=terminals,
            arms=tuple(arms[i] for i in range(len(terminals))),
            network=graph.network,
        )
        stars.setdefault(_candidate_key(star, 0.0)[1:], star)
    return list(stars.values())


def star_from_tree(graph: CostGraph, tree: SteinerTree) -> Star | None:
    """Reinterpret a star-shaped tree (a spider) as a :class:`Star`."""
    contracted = contract_tree(tree, graph.q)
    if not contracted.is_star:
        return None
    center = contracted.center
    arms = []
    for t in tree.terminals:
        if t == center:
            arms.append(graph.record((t,)))
        else:
            arms.append(graph.record(nx.shortest_path(tree.graph, t, center)))
    return Star(center=center, terminals=tree.terminals, arms=tuple(arms), network=graph.network)


def best_star_in(graph: CostGraph, terminals: Sequence[int]) -> Star | None:
    terms = tuple(terminals)
    if len(terms) < 2:
        raise InvalidArgumentError(f"a star needs at least 2 terminals, got {len(terms)}")
    if len(set(terms)) != len(terms):
        raise InvalidArgumentError(f"terminals must be distinct: {terms}")

    def score(star: Star) -> float:
        return structure_score(star, graph.q, link_survival=graph.link_survival)

    best: Star | None = None
    best_key: tuple | None = None

    def consider(star: Star) -> None:
        nonlocal best, best_key
        key = _candidate_key(star, score(star))
        if best_key is None or key < best_key:
            best, best_key = star, key

    if len(terms) == 3:
        tree = best_tree_in(graph, terms)
        if tree is None:
            return None
        spider = star_from_tree(graph, tree)
        if spider is not None:
            consider(spider)

    bounds = _center_bounds(graph, terms)
    evaluated = 0
    for center in sorted(bounds, key=lambda c: (-bounds[c], c)):
        ub = round(bounds[center] * (1.0 + BOUND_SLACK), SCORE_DIGITS)
        if best_key is not None:
            best_score = -best_key[0]
            if ub < best_score:
                break
            if ub == best_score and center > best_key[1]:
                continue
        evaluated += 1
        for star in _stars_at(graph, terms, center):
            consider(star)

    logger.debug("Star search over %s evaluated %d of %d centers", terms, evaluated, len(bounds))
    return best


def find_best_star(
    snapshot: Snapshot,
    terminals: Sequence[int],
    q: float | None = None,
    *,
    link_survival: bool = False,
) -> Star | None:
    """Highest-scoring star on the alive links, or None if no center admits disjoint arms."""
    return best_star_in(CostGraph(snapshot, q, link_survival), terminals)


def pack_stars_in(
    graph: CostGraph, terminals: Sequence[int], limit: int | None = None
) -> list[Star]:
    stars: list[Star] = []
    while limit is None or len(stars) < limit:
        star = best_star_in(graph, terminals)
        if star is None:
            break
        stars.append(star)
        graph = graph.residual(star.used_edges)
    return stars


def pack_stars(
    snapshot: Snapshot,
    terminals: Sequence[int],
    q: float | None = None,
    *,
    link_survival: bool = False,
) -> list[Star]:
    """Edge-disjoint stars found greedily, in discovery order."""
    return pack_stars_in(CostGraph(snapshot, q, link_survival), terminals)
