"""Additive path metric and deterministic shortest paths over a snapshot."""

from __future__ import annotations

import heapq
import logging
import math
from collections.abc import Collection, Iterable
from dataclasses import dataclass
from functools import cached_property

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Edge, Network, Snapshot, edge_key, path_edges

logger = logging.getLogger(__name__)

COST_DIGITS = 12


def link_cost(gamma_link: float, q: float, p: float = 1.0) -> float:
    """``−ln γ − ln q`` (and ``− ln p`` when link survival is scored).

    A link with any zero factor is absent and costs ``inf``.
    """
    for name, value in (("gamma", gamma_link), ("q", q), ("p", p)):
        if not 0.0 <= value <= 1.0:
            raise InvalidArgumentError(f"{name} must lie in [0, 1], got {value}")
    if gamma_link == 0.0 or q == 0.0 or p == 0.0:
        return math.inf
    return -math.log(gamma_link) - math.log(q) - math.log(p)


@dataclass(frozen=True)
class PathRecord:
    nodes: tuple[int, ...]
    n_links: int
    gamma_p: float
    cost: float

    def __post_init__(self) -> None:
        if not self.nodes:
            raise InvalidArgumentError("a path needs at least one node")
        if self.n_links != len(self.nodes) - 1:
            raise InvalidArgumentError(
                f"path {self.nodes} has {len(self.nodes) - 1} links, not {self.n_links}"
            )
        if not math.isfinite(self.cost):
            raise InvalidArgumentError(f"path {self.nodes} has infinite cost")

    @property
    def src(self) -> int:
        return self.nodes[0]

    @property
    def dst(self) -> int:
        return self.nodes[-1]

    @property
    def interior(self) -> tuple[int, ...]:
        return self.nodes[1:-1]

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return path_edges(self.nodes)

    def reversed(self) -> PathRecord:
        return PathRecord(self.nodes[::-1], self.n_links, self.gamma_p, self.cost)

    def label(self) -> str:
        return "-".join(str(n) for n in self.nodes)


# ---------------------------------------------------------------------------
# CostGraph
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class CostGraph:
    """Alive links of a snapshot weighted by :func:`link_cost`.

    With ``q`` unset each link is charged ``sqrt(q_u * q_v)`` so that a path
    pays the full q of every interior node and half of each endpoint's.
    """

    snapshot: Snapshot
    q: float | None = None
    link_survival: bool = False

    @property
    def network(self) -> Network:
        return self.snapshot.parent

    def node_q(self, node: int) -> float:
        return self.network.q(node) if self.q is None else self.q

    @cached_property
    def costs(self) -> dict[Edge, float]:
        net = self.network
        out = {}
        for u, v in self.snapshot.alive_links:
            q = self.q if self.q is not None else math.sqrt(net.q(u) * net.q(v))
            p = net.p(u, v) if self.link_survival else 1.0
            out[(u, v)] = link_cost(net.gamma(u, v), q, p)
        return out

    @cached_property
    def neighbors(self) -> dict[int, tuple[tuple[int, float], ...]]:
        nbrs: dict[int, list[tuple[int, float]]] = {n: [] for n in range(self.network.n_nodes)}
        for (u, v), cost in self.costs.items():
            if math.isfinite(cost):
                nbrs[u].append((v, cost))
                nbrs[v].append((u, cost))
        return {n: tuple(sorted(vs)) for n, vs in nbrs.items()}

    def record(self, nodes: Iterable[int]) -> PathRecord:
        seq = tuple(nodes)
        net = self.network
        edges = path_edges(seq)
        gamma = math.prod(net.gamma(u, v) for u, v in edges)
        cost = math.fsum(self.costs[e] for e in edges)
        return PathRecord(seq, len(edges), gamma, cost)

    def interior_success(self, path: PathRecord) -> float:
        """Product of q over the path's interior nodes (times p per link under survival)."""
        value = math.prod(self.node_q(n) for n in path.interior)
        if self.link_survival:
            value *= math.prod(self.network.p(u, v) for u, v in path.edges)
        return value

    def residual(self, used: Iterable[Edge]) -> CostGraph:
        return CostGraph(self.snapshot.residual(used), self.q, self.link_survival)

    def shortest_path(
        self,
        src: int,
        dst: int,
        *,
        banned_nodes: Collection[int] = frozenset(),
        banned_edges: Collection[Edge] = frozenset(),
    ) -> PathRecord | None:
        found = dijkstra(
            self, src, targets={dst}, banned_nodes=banned_nodes, banned_edges=banned_edges
        )
        if dst not in found:
            return None
        return self.record(found[dst][1])


def dijkstra(
    graph: CostGraph,
    src: int,
    *,
    targets: Collection[int] | None = None,
    banned_nodes: Collection[int] = frozenset(),
    banned_edges: Collection[Edge] = frozenset(),
) -> dict[int, tuple[float, tuple[int, ...]]]:
    """Single-source shortest paths keyed by ``(cost, hops, node sequence)``.

    Equal costs (to 12 decimals) resolve to the fewest links, then to the
    lexicographically smallest node sequence. Banned nodes may end a
    path but never sit inside one. Stops once every node in *targets* is
    settled.
    """
    settled: dict[int, tuple[float, tuple[int, ...]]] = {}
    remaining = set(targets) if targets is not None else None
    heap: list[tuple[float, int, tuple[int, ...], float]] = [(0.0, 0, (src,), 0.0)]
    while heap:
        _, _, path, cost = heapq.heappop(heap)
        node = path[-1]
        if node in settled:
            continue
        settled[node] = (cost, path)
        if remaining is not None:
            remaining.discard(node)
            if not remaining:
                break
        if node != src and node in banned_nodes:
            continue
        for nbr, step in graph.neighbors[node]:
            if nbr in settled or (banned_edges and edge_key(node, nbr) in banned_edges):
                continue
            total = cost + step
            heapq.heappush(heap, (round(total, COST_DIGITS), len(path), path + (nbr,), total))
    return settled


def shortest_path(
    snapshot: Snapshot,
    src: int,
    dst: int,
    q: float | None = None,
    *,
    link_survival: bool = False,
) -> PathRecord | None:
    """Minimum-cost alive path from *src* to *dst*, or None when disconnected."""
    return CostGraph(snapshot, q, link_survival).shortest_path(src, dst)
