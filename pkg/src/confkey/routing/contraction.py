"""Contract a Steiner tree to its terminals and branch nodes.

Repeaters of degree two vanish into contracted edges whose γ is the product
along the underlying path; terminals of degree two or more stay as vertices
and are marked for fusion.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Edge, Network, Snapshot
from confkey.routing.paths import CostGraph, PathRecord
from confkey.routing.structures import SteinerTree

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ContractedTree:
    terminals: tuple[int, ...]
    vertices: tuple[int, ...]
    contracted_edges: tuple[PathRecord, ...]
    fusion_nodes: frozenset[int] = frozenset()
    network: Network | None = field(default=None, compare=False, repr=False)

    def __post_init__(self) -> None:
        vertex_set = set(self.vertices)
        if not set(self.terminals) <= vertex_set:
            raise InvalidArgumentError("every terminal must be a vertex")
        if len(self.contracted_edges) != len(self.vertices) - 1:
            raise InvalidArgumentError(
                f"{len(self.contracted_edges)} edges cannot join {len(self.vertices)} vertices"
            )
        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        for edge in self.contracted_edges:
            if edge.src not in vertex_set or edge.dst not in vertex_set:
                raise InvalidArgumentError(f"contracted edge {edge.nodes} must join two vertices")
            if vertex_set & set(edge.interior):
                raise InvalidArgumentError(f"contracted edge {edge.nodes} passes a vertex")
            g.add_edge(edge.src, edge.dst)
        if not nx.is_tree(g):
            raise InvalidArgumentError("contracted edges do not form a tree")

    @cached_property
    def _incidence(self) -> dict[int, tuple[int, ...]]:
        table: dict[int, list[int]] = {v: [] for v in self.vertices}
        for e, edge in enumerate(self.contracted_edges):
            table[edge.src].append(e)
            table[edge.dst].append(e)
        return {v: tuple(es) for v, es in table.items()}

    def incident(self, vertex: int) -> tuple[int, ...]:
        return self._incidence[vertex]

    def other_end(self, e: int, vertex: int) -> int:
        edge = self.contracted_edges[e]
        return edge.dst if edge.src == vertex else edge.src

    def degree(self, vertex: int) -> int:
        return len(self._incidence[vertex])

    @cached_property
    def nonleaf_nodes(self) -> tuple[int, ...]:
        """Non-leaf nodes of the uncontracted tree."""
        inner = {n for edge in self.contracted_edges for n in edge.interior}
        inner.update(v for v in self.vertices if self.degree(v) >= 2)
        return tuple(sorted(inner))

    @property
    def n_nonleaf(self) -> int:
        return len(self.nonleaf_nodes)

    @property
    def is_star(self) -> bool:
        return sum(1 for v in self.vertices if self.degree(v) >= 2) <= 1

    @property
    def center(self) -> int:
        """The single branching vertex of a star-shaped tree (first terminal for a lone edge)."""
        hubs = [v for v in self.vertices if self.degree(v) >= 2]
        if len(hubs) > 1:
            raise InvalidArgumentError("tree is not star-shaped")
        return hubs[0] if hubs else self.terminals[0]

    def arm_gammas(self) -> tuple[float, ...]:
        """Per-terminal path γ towards the center; the center's own arm is 1."""
        center = self.center
        gammas = []
        for t in self.terminals:
            if t == center:
                gammas.append(1.0)
                continue
            (e,) = self.incident(t)
            gammas.append(self.contracted_edges[e].gamma_p)
        return tuple(gammas)

    def canonical(self) -> ContractedTree:
        """Relabelled copy: terminals become 0..N-1, other vertices follow by id.

        Two trees with the same shape and edge γ map to equal keys.
        """
        n = len(self.terminals)
        relabel = {t: i for i, t in enumerate(self.terminals)}
        others = sorted(v for v in self.vertices if v not in relabel)
        relabel.update({v: n + i for i, v in enumerate(others)})
        edges = []
        for edge in self.contracted_edges:
            a, b = sorted((relabel[edge.src], relabel[edge.dst]))
            edges.append(PathRecord((a, b), 1, edge.gamma_p, 0.0))
        edges.sort(key=lambda e: (e.nodes, e.gamma_p))
        return ContractedTree(
            terminals=tuple(range(n)),
            vertices=tuple(range(len(self.vertices))),
            contracted_edges=tuple(edges),
            fusion_nodes=frozenset(relabel[v] for v in self.fusion_nodes),
        )


def contract_tree(tree: SteinerTree, q: float | None = None) -> ContractedTree:
    g = tree.graph
    terminals = set(tree.terminals)
    vertices = sorted(n for n in g if n in terminals or g.degree[n] >= 3)
    vertex_set = set(vertices)
    graph = CostGraph(Snapshot(parent=tree.network, alive_links=tree.edges), q)

    seen: set[Edge] = set()
    records = []
    for v in vertices:
        for nbr in sorted(g[v]):
            walk = [v, nbr]
            while walk[-1] not in vertex_set:
                prev, here = walk[-2], walk[-1]
                (step,) = [n for n in g[here] if n != prev]
                walk.append(step)
            key = (min(walk[0], walk[-1]), max(walk[0], walk[-1]), tuple(sorted(walk[1:-1])))
            if key in seen:
                continue
            seen.add(key)
            if walk[0] > walk[-1]:
                walk.reverse()
            records.append(graph.record(walk))

    records.sort(key=lambda r: r.nodes)
    contracted = ContractedTree(
        terminals=tree.terminals,
        vertices=tuple(vertices),
        contracted_edges=tuple(records),
        fusion_nodes=tree.fusion_nodes,
        network=tree.network,
    )
    logger.debug(
        "Contracted %d links to %d edges (fusion at %s)",
        len(tree.edges),
        len(records),
        sorted(tree.fusion_nodes),
    )
    return contracted


def expanded_tree(contracted: ContractedTree) -> SteinerTree:
    """Undo :func:`contract_tree`."""
    if contracted.network is None:
        raise InvalidArgumentError("a canonical contracted tree cannot be expanded")
    edges = frozenset(e for record in contracted.contracted_edges for e in record.edges)
    return SteinerTree(edges, contracted.terminals, contracted.network)
