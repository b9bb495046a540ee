"""Immutable repeater-network model and Phase-1 snapshot sampling.

A :class:`Network` wraps a frozen ``networkx.Graph`` whose nodes are the
integers ``0..n-1``. Every link carries ``p`` (link-generation success
probability) and ``gamma`` (depolarizing parameter); every node carries
``q`` (swap / GHZ-measurement / fusion success probability).
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field, replace
from functools import cached_property

import networkx as nx
import numpy as np

from confkey.core import settings
from confkey.core.errors import (
    ContractViolationError,
    GenerationFailureError,
    InvalidArgumentError,
)

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


def edge_key(u: int, v: int) -> Edge:
    """Return the canonical (lower id first) form of an undirected link."""
    return (u, v) if u < v else (v, u)


def _check_unit(name: str, value: float) -> None:
    if not 0.0 <= value <= 1.0:
        raise InvalidArgumentError(f"{name} must lie in [0, 1], got {value}")


# ---------------------------------------------------------------------------
# Network
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Network:
    """Weighted undirected repeater network with an ordered terminal list."""

    graph: nx.Graph
    terminals: tuple[int, ...] = ()
    shape: tuple[int, int] | None = None  # (width, height) for grid topologies

    def __post_init__(self) -> None:
        g = self.graph
        n = g.number_of_nodes()
        if n == 0:
            raise InvalidArgumentError("a network needs at least one node")
        if set(g.nodes) != set(range(n)):
            raise InvalidArgumentError("node ids must be the integers 0..n-1")
        if nx.number_of_selfloops(g):
            raise InvalidArgumentError("self-loops are not allowed")
        if not nx.is_connected(g):
            raise InvalidArgumentError("the network must be connected")
        for node, q in g.nodes(data="q"):
            if q is None:
                raise InvalidArgumentError(f"node {node} has no q value")
            _check_unit(f"q of node {node}", q)
        for u, v, data in g.edges(data=True):
            _check_unit(f"p of link {u}-{v}", data["p"])
            _check_unit(f"gamma of link {u}-{v}", data["gamma"])
        if len(set(self.terminals)) != len(self.terminals):
            raise InvalidArgumentError(f"terminals must be distinct: {self.terminals}")
        for t in self.terminals:
            if t not in g:
                raise InvalidArgumentError(f"terminal {t} is not a node")
        if not nx.is_frozen(g):
            object.__setattr__(self, "graph", nx.freeze(g))

    @classmethod
    def from_links(
        cls,
        n_nodes: int,
        links: Mapping[Edge, tuple[float, float]],
        q: float | Mapping[int, float],
        terminals: Iterable[int] = (),
    ) -> Network:
        """Build a network from ``{(u, v): (p, gamma)}`` and a scalar or per-node q."""
        g = nx.Graph()
        for node in range(n_nodes):
            g.add_node(node, q=q if isinstance(q, (int, float)) else q[node])
        for (u, v), (p, gamma) in links.items():
            if u == v:
                raise InvalidArgumentError(f"self-loop on node {u}")
            if g.has_edge(u, v):
                raise InvalidArgumentError(f"parallel link {u}-{v}")
            if u not in g or v not in g:
                raise InvalidArgumentError(f"link {u}-{v} references an unknown node")
            g.add_edge(u, v, p=p, gamma=gamma)
        return cls(graph=g, terminals=tuple(terminals))

    # -- accessors -----------------------------------------------------------

    @property
    def n_nodes(self) -> int:
        return self.graph.number_of_nodes()

    @cached_property
    def links(self) -> frozenset[Edge]:
        return frozenset(edge_key(u, v) for u, v in self.graph.edges)

    @cached_property
    def sorted_links(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.links))

    def p(self, u: int, v: int) -> float:
        return self.graph.edges[u, v]["p"]

    def gamma(self, u: int, v: int) -> float:
        return self.graph.edges[u, v]["gamma"]

    def q(self, node: int) -> float:
        return self.graph.nodes[node]["q"]

    def degree(self, node: int) -> int:
        return self.graph.degree[node]

    def mean_degree(self) -> float:
        return 2.0 * self.graph.number_of_edges() / self.n_nodes

    def with_terminals(self, terminals: Iterable[int]) -> Network:
        return replace(self, terminals=tuple(terminals))

    def node_at(self, row: int, col: int) -> int:
        """Node id of grid cell (row, col)."""
        if self.shape is None:
            raise InvalidArgumentError("grid coordinates need a grid topology")
        width, height = self.shape
        if not (0 <= row < height and 0 <= col < width):
            raise InvalidArgumentError(
                f"cell ({row}, {col}) is outside the {width}x{height} grid"
            )
        return row * width + col


# ---------------------------------------------------------------------------
# Topology builders
# ---------------------------------------------------------------------------


def build_grid(width: int, height: int, p: float, gamma: float, q: float) -> Network:
    """4-neighbor lattice; node ``row * width + col`` sits at (row, col)."""
    if width < 2 or height < 2:
        raise InvalidArgumentError(f"grid dimensions must be >= 2, got {width}x{height}")
    for name, value in (("p", p), ("gamma", gamma), ("q", q)):
        _check_unit(name, value)

    g = nx.Graph()
    for row in range(height):
        for col in range(width):
            g.add_node(row * width + col, q=q, pos=(row, col))
    for row in range(height):
        for col in range(width):
            node = row * width + col
            if col + 1 < width:
                g.add_edge(node, node + 1, p=p, gamma=gamma)
            if row + 1 < height:
                g.add_edge(node, node + width, p=p, gamma=gamma)
    logger.debug("Built %dx%d grid with %d links", width, height, g.number_of_edges())
    return Network(graph=g, shape=(width, height))


def build_random_geometric(
    n_nodes: int,
    radius: float,
    p: float,
    gamma: float,
    q: float,
    seed: int,
    max_retries: int | None = None,
) -> Network:
    """Uniform placement in the unit square, link iff distance < radius.

    The whole placement is redrawn until the graph is connected. Attempt *k*
    draws from ``SeedSequence([seed, k])`` so the result depends on *seed* only.
    """
    if n_nodes < 2:
        raise InvalidArgumentError(f"n_nodes must be >= 2, got {n_nodes}")
    if radius <= 0:
        raise InvalidArgumentError(f"radius must be positive, got {radius}")
    if seed < 0:
        raise InvalidArgumentError(f"seed must be non-negative, got {seed}")
    for name, value in (("p", p), ("gamma", gamma), ("q", q)):
        _check_unit(name, value)
    retries = settings.RGG_MAX_RETRIES if max_retries is None else max_retries

    for attempt in range(retries):
        rng = np.random.default_rng(np.random.SeedSequence([seed, attempt]))
        pos = rng.uniform(0.0, 1.0, size=(n_nodes, 2))
        diff = pos[:, None, :] - pos[None, :, :]
        dist = np.sqrt((diff**2).sum(axis=-1))
        rows, cols = np.nonzero(np.triu(dist < radius, k=1))

        g = nx.Graph()
        for node in range(n_nodes):
            g.add_node(node, q=q, pos=(float(pos[node, 0]), float(pos[node, 1])))
        g.add_edges_from(zip(rows.tolist(), cols.tolist()), p=p, gamma=gamma)
        if nx.is_connected(g):
            logger.debug(
                "Random geometric graph (seed=%s) connected after %d attempt(s)",
                seed,
                attempt + 1,
            )
            return Network(graph=g)
        logger.debug("Placement %d for seed %s is disconnected, redrawing", attempt, seed)

    logger.warning("Giving up on seed %s after %d placements", seed, retries)
    raise GenerationFailureError(n_nodes, radius, retries)


# ---------------------------------------------------------------------------
# Snapshots
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Snapshot:
    """Links that survived Phase 1 of one round."""

    parent: Network
    alive_links: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        stray = self.alive_links - self.parent.links
        if stray:
            raise ContractViolationError(
                f"snapshot links {sorted(stray)} are not links of the network"
            )

    @classmethod
    def full(cls, network: Network) -> Snapshot:
        """Snapshot in which every link of *network* is alive."""
        return cls(parent=network, alive_links=network.links)

    def is_alive(self, u: int, v: int) -> bool:
        return edge_key(u, v) in self.alive_links

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        """Sorted alive neighbors per node."""
        nbrs: dict[int, list[int]] = {node: [] for node in range(self.parent.n_nodes)}
        for u, v in self.alive_links:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return {node: tuple(sorted(vs)) for node, vs in nbrs.items()}

    def residual(self, used: Iterable[Edge]) -> Snapshot:
        return residual(self, used)


def sample_snapshot(network: Network, rng: np.random.Generator) -> Snapshot:
    """Keep each link independently with its own ``p``; one uniform draw per link."""
    links = network.sorted_links
    draws = rng.random(len(links))
    alive = frozenset(
        e for e, draw in zip(links, draws) if draw < network.p(*e)
    )
    return Snapshot(parent=network, alive_links=alive)


def residual(snapshot: Snapshot, used: Iterable[Edge]) -> Snapshot:
    """Return a new snapshot without the *used* links."""
    used_set = frozenset(edge_key(u, v) for u, v in used)
    dead = used_set - snapshot.alive_links
    if dead:
        raise ContractViolationError(f"cannot remove links that are not alive: {sorted(dead)}")
    return Snapshot(parent=snapshot.parent, alive_links=snapshot.alive_links - used_set)


def path_edges(nodes: Iterable[int]) -> tuple[Edge, ...]:
    """Canonical links traversed by a node sequence."""
    seq = list(nodes)
    return tuple(edge_key(a, b) for a, b in zip(seq, seq[1:]))
