"""Key-rate weighted Steiner trees and greedy tree packing.

The heuristic follows the classical MST-of-metric-closure construction:

1. shortest paths between every pair of terminals form a complete graph G1,
   weighted by the negated pairwise key-rate proxy of each path;
2. a minimum spanning tree of G1;
3. its edges are expanded back into their paths, giving G_S;
4. a minimum spanning tree of G_S under the link cost;
5. non-terminal leaves are pruned until only terminals remain as leaves.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

import networkx as nx

from confkey.core.errors import InvalidArgumentError
from confkey.keyrate.rates import pairwise_rate_proxy
from confkey.network.graph import Edge, Snapshot
from confkey.routing.paths import CostGraph, PathRecord, dijkstra
from confkey.routing.structures import SteinerTree

logger = logging.getLogger(__name__)


def _check_terminals(terminals: Sequence[int]) -> tuple[int, ...]:
    terms = tuple(terminals)
    if len(terms) < 2:
        raise InvalidArgumentError(f"a Steiner tree needs at least 2 terminals, got {len(terms)}")
    if len(set(terms)) != len(terms):
        raise InvalidArgumentError(f"terminals must be distinct: {terms}")
    return terms


def path_proxy(graph: CostGraph, path: PathRecord) -> float:
    """Pairwise key-rate proxy of *path* with its actual interior success."""
    return pairwise_rate_proxy(path.gamma_p, path.n_links, 1.0) * graph.interior_success(path)


def terminal_paths(
    graph: CostGraph, terminals: Sequence[int]
) -> dict[tuple[int, int], PathRecord] | None:
    """Shortest path for every terminal index pair ``(i, j)``, ``i < j``; None if any is missing."""
    paths = {}
    for i, a in enumerate(terminals):
        rest = terminals[i + 1 :]
        if not rest:
            break
        found = dijkstra(graph, a, targets=set(rest))
        for j, b in enumerate(rest, start=i + 1):
            if b not in found:
                return None
            paths[(i, j)] = graph.record(found[b][1])
    return paths


def _kruskal(weighted: list[tuple]) -> list[tuple[int, int]]:
    """Minimum spanning forest over ``(*sort_key, u, v)`` rows sorted ascending."""
    uf = nx.utils.UnionFind()
    chosen = []
    for row in sorted(weighted):
        u, v = row[-2], row[-1]
        if uf[u] != uf[v]:
            uf.union(u, v)
            chosen.append((u, v))
    return chosen


def best_tree_in(graph: CostGraph, terminals: Sequence[int]) -> SteinerTree | None:
    terms = _check_terminals(terminals)
    paths = terminal_paths(graph, terms)
    if paths is None:
        return None

    closure = [(-path_proxy(graph, path), path.cost, i, j) for (i, j), path in paths.items()]
    backbone = _kruskal(closure)

    expanded: set[Edge] = set()
    for i, j in backbone:
        expanded.update(paths[(i, j)].edges)
    tree_edges = _kruskal([(graph.costs[e], e[0], e[1]) for e in expanded])

    g = nx.Graph()
    g.add_edges_from(tree_edges)
    term_set = set(terms)
    while True:
        leaves = sorted(n for n in g if g.degree[n] == 1 and n not in term_set)
        if not leaves:
            break
        g.remove_nodes_from(leaves)

    tree = SteinerTree(frozenset(g.edges), terms, graph.network)
    logger.debug(
        "Steiner tree over %s: %d links, %d non-leaf", terms, len(tree.edges), tree.non_leaf_count
    )
    return tree


def steiner_tree(
    snapshot: Snapshot,
    terminals: Sequence[int],
    q: float | None = None,
    *,
    link_survival: bool = False,
) -> SteinerTree | None:
    """Approximate Steiner tree on the alive links, or None if a terminal is cut off."""
    return best_tree_in(CostGraph(snapshot, q, link_survival), terminals)


def pack_trees_in(
    graph: CostGraph, terminals: Sequence[int], limit: int | None = None
) -> list[SteinerTree]:
    trees: list[SteinerTree] = []
    while limit is None or len(trees) < limit:
        tree = best_tree_in(graph, terminals)
        if tree is None:
            break
        trees.append(tree)
        graph = graph.residual(tree.edges)
    return trees


def pack_trees(
    snapshot: Snapshot,
    terminals: Sequence[int],
    q: float | None = None,
    *,
    link_survival: bool = False,
) -> list[SteinerTree]:
    """Edge-disjoint trees found greedily until the terminals are disconnected."""
    return pack_trees_in(CostGraph(snapshot, q, link_survival), terminals)
