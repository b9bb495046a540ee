"""Distribution structures: stars and Steiner trees over the repeater network."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property

import networkx as nx

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Edge, Network, edge_key
from confkey.routing.paths import PathRecord

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Star:
    """One center joined to every terminal by an arm.

    ``arms[i]`` runs from ``terminals[i]`` to ``center``; the arm of a
    terminal that is itself the center is the empty path. Arms share no
    link and meet only at the center.
    """

    center: int
    terminals: tuple[int, ...]
    arms: tuple[PathRecord, ...]
    network: Network = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.arms) != len(self.terminals):
            raise InvalidArgumentError(
                f"{len(self.arms)} arms for {len(self.terminals)} terminals"
            )
        interiors: set[int] = set()
        edges: set[Edge] = set()
        for t, arm in zip(self.terminals, self.arms):
            if arm.src != t or arm.dst != self.center:
                raise InvalidArgumentError(f"arm {arm.nodes} does not join {t} to {self.center}")
            if edges & set(arm.edges):
                raise InvalidArgumentError(f"arm {arm.nodes} reuses a link")
            inner = set(arm.interior)
            if inner & interiors or inner & set(self.terminals):
                raise InvalidArgumentError(f"arm {arm.nodes} crosses another arm or terminal")
            edges.update(arm.edges)
            interiors.update(inner)

    @cached_property
    def used_edges(self) -> frozenset[Edge]:
        return frozenset(e for arm in self.arms for e in arm.edges)

    @cached_property
    def nonleaf_nodes(self) -> tuple[int, ...]:
        """The center plus every repeater inside an arm."""
        return tuple(sorted({self.center, *(n for arm in self.arms for n in arm.interior)}))

    @property
    def n_nonleaf(self) -> int:
        return len(self.nonleaf_nodes)

    @property
    def arm_gammas(self) -> tuple[float, ...]:
        return tuple(arm.gamma_p for arm in self.arms)

    @property
    def arm_lengths(self) -> tuple[int, ...]:
        return tuple(arm.n_links for arm in self.arms)

    def as_tree(self) -> SteinerTree:
        return SteinerTree(self.used_edges, self.terminals, self.network)


@dataclass(frozen=True)
class SteinerTree:
    """A tree of alive links spanning the terminals whose leaves are all terminals."""

    edges: frozenset[Edge]
    terminals: tuple[int, ...]
    network: Network = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if len(self.terminals) < 2:
            raise InvalidArgumentError("a tree needs at least 2 terminals")
        object.__setattr__(self, "edges", frozenset(edge_key(u, v) for u, v in self.edges))
        g = self.graph
        missing = set(self.terminals) - set(g.nodes)
        if missing:
            raise InvalidArgumentError(f"tree does not reach terminals {sorted(missing)}")
        if not nx.is_tree(g):
            raise InvalidArgumentError("edges do not form a tree")
        stray = [n for n in g if g.degree[n] == 1 and n not in self.terminals]
        if stray:
            raise InvalidArgumentError(f"non-terminal leaves {sorted(stray)}")

    @cached_property
    def graph(self) -> nx.Graph:
        g = nx.Graph()
        g.add_edges_from(self.edges)
        return g

    @property
    def used_edges(self) -> frozenset[Edge]:
        return self.edges

    @cached_property
    def nonleaf_nodes(self) -> tuple[int, ...]:
        g = self.graph
        return tuple(sorted(n for n in g if g.degree[n] >= 2))

    @property
    def non_leaf_count(self) -> int:
        return len(self.nonleaf_nodes)

    @property
    def n_nonleaf(self) -> int:
        return self.non_leaf_count

    @cached_property
    def fusion_nodes(self) -> frozenset[int]:
        """Terminals that sit inside the tree rather than at a leaf."""
        g = self.graph
        return frozenset(t for t in self.terminals if g.degree[t] >= 2)


Structure = Star | SteinerTree
