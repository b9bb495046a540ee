from __future__ import annotations

import collections
import math
import os

import networkx as nx
import numpy as np
import pytest

from confkey.core.errors import (
    ContractViolationError,
    GenerationFailureError,
    InvalidArgumentError,
)
from confkey.network.graph import (
    Network,
    Snapshot,
    build_grid,
    build_random_geometric,
    edge_key,
    path_edges,
    residual,
    sample_snapshot,
)

_slow = os.environ.get("CONFKEY_TEST_SLOW", "").lower() in ("1", "true", "yes")


class TestNetwork:
    def test_from_links(self, make_network):
        net = make_network(3, [(0, 1, 0.9), (2, 1)], p=0.8, q=0.7, terminals=[0, 2])
        assert net.n_nodes == 3
        assert net.links == frozenset({(0, 1), (1, 2)})
        assert net.gamma(1, 0) == 0.9
        assert net.gamma(1, 2) == 1.0
        assert net.p(0, 1) == 0.8
        assert net.q(2) == 0.7
        assert net.terminals == (0, 2)

    def test_per_node_q(self, make_network):
        net = make_network(2, [(0, 1)], q={0: 0.5, 1: 0.25})
        assert (net.q(0), net.q(1)) == (0.5, 0.25)

    def test_graph_is_frozen(self, square):
        with pytest.raises(nx.NetworkXError):
            square.graph.add_edge(0, 2)

    @pytest.mark.parametrize(
        "n,links,match",
        [
            (3, [(0, 1)], "connected"),
            (2, [(0, 0)], "self-loop"),
            (2, [(0, 1), (1, 0)], "parallel"),
            (2, [(0, 5)], "unknown node"),
        ],
        ids=["disconnected", "self-loop", "parallel", "unknown-node"],
    )
    def test_rejects_bad_graphs(self, make_network, n, links, match):
        with pytest.raises(InvalidArgumentError, match=match):
            make_network(n, links)

    def test_rejects_out_of_range_parameters(self, make_network):
        with pytest.raises(InvalidArgumentError, match="gamma of link"):
            make_network(2, [(0, 1, 1.5)])
        with pytest.raises(InvalidArgumentError, match="q of node"):
            make_network(2, [(0, 1)], q=-0.1)

    def test_rejects_duplicate_terminals(self, make_network):
        with pytest.raises(InvalidArgumentError, match="distinct"):
            make_network(2, [(0, 1)], terminals=[1, 1])

    def test_rejects_non_contiguous_ids(self):
        g = nx.Graph()
        g.add_node(0, q=1.0)
        g.add_node(5, q=1.0)
        g.add_edge(0, 5, p=1.0, gamma=1.0)
        with pytest.raises(InvalidArgumentError, match="0..n-1"):
            Network(graph=g)

    def test_with_terminals_keeps_graph(self, square):
        moved = square.with_terminals([3, 1])
        assert moved.terminals == (3, 1)
        assert moved.graph is square.graph


class TestGrid:
    def test_shape(self):
        net = build_grid(7, 7, 0.85, 0.99, 0.9)
        assert net.n_nodes == 49
        assert len(net.links) == 84
        assert net.shape == (7, 7)
        assert net.degree(net.node_at(0, 0)) == 2
        assert net.degree(net.node_at(3, 3)) == 4

    def test_node_ids_are_row_major(self):
        net = build_grid(5, 3, 1.0, 1.0, 1.0)
        assert net.node_at(2, 3) == 13
        assert (net.node_at(1, 1), net.node_at(1, 2)) in net.links

    def test_node_at_bounds(self):
        net = build_grid(3, 3, 1.0, 1.0, 1.0)
        with pytest.raises(InvalidArgumentError, match="outside"):
            net.node_at(3, 0)

    def test_node_at_needs_grid(self, square):
        with pytest.raises(InvalidArgumentError, match="grid"):
            square.node_at(0, 0)

    def test_rejects_tiny_grid(self):
        with pytest.raises(InvalidArgumentError, match=">= 2"):
            build_grid(1, 5, 1.0, 1.0, 1.0)


class TestRandomGeometric:
    def test_deterministic(self):
        a = build_random_geometric(30, 0.35, 0.9, 0.99, 0.9, seed=4)
        b = build_random_geometric(30, 0.35, 0.9, 0.99, 0.9, seed=4)
        assert a.links == b.links
        assert nx.is_connected(a.graph)

    def test_seeds_differ(self):
        a = build_random_geometric(30, 0.35, 0.9, 0.99, 0.9, seed=1)
        b = build_random_geometric(30, 0.35, 0.9, 0.99, 0.9, seed=2)
        assert a.links != b.links

    def test_links_respect_radius(self):
        net = build_random_geometric(40, 0.3, 1.0, 1.0, 1.0, seed=3)
        pos = nx.get_node_attributes(net.graph, "pos")
        for u in range(net.n_nodes):
            for v in range(u + 1, net.n_nodes):
                close = np.hypot(*(np.subtract(pos[u], pos[v]))) < 0.3
                assert close == ((u, v) in net.links)

    def test_mean_degree(self):
        degrees = [
            build_random_geometric(50, 0.3, 1.0, 1.0, 1.0, seed=s).mean_degree()
            for s in range(100)
        ]
        assert abs(np.mean(degrees) - 9.752) <= 1.0

    def test_gives_up(self):
        with pytest.raises(GenerationFailureError) as exc_info:
            build_random_geometric(50, 0.01, 1.0, 1.0, 1.0, seed=0, max_retries=3)
        assert exc_info.value.attempts == 3
        assert exc_info.value.n_nodes == 50

    @pytest.mark.parametrize(
        "kwargs,match",
        [
            ({"n_nodes": 1}, "n_nodes"),
            ({"radius": 0.0}, "radius"),
            ({"seed": -1}, "seed"),
        ],
        ids=["one-node", "zero-radius", "negative-seed"],
    )
    def test_rejects_arguments(self, kwargs, match):
        args = {"n_nodes": 10, "radius": 0.5, "p": 1.0, "gamma": 1.0, "q": 1.0, "seed": 0}
        args.update(kwargs)
        with pytest.raises(InvalidArgumentError, match=match):
            build_random_geometric(**args)


class TestSnapshots:
    def test_full(self, square):
        snap = Snapshot.full(square)
        assert snap.alive_links == square.links
        assert snap.is_alive(1, 0)

    def test_sampling_extremes(self, make_network):
        always = make_network(3, [(0, 1), (1, 2)], p=1.0)
        never = make_network(3, [(0, 1), (1, 2)], p=0.0)
        rng = np.random.default_rng(0)
        assert sample_snapshot(always, rng).alive_links == always.links
        assert sample_snapshot(never, rng).alive_links == frozenset()

    def test_sampling_is_seeded(self):
        net = build_grid(5, 5, 0.5, 1.0, 1.0)
        a = sample_snapshot(net, np.random.default_rng(11))
        b = sample_snapshot(net, np.random.default_rng(11))
        assert a.alive_links == b.alive_links

    def test_sampling_frequency(self):
        net = build_grid(5, 5, 0.3, 1.0, 1.0)
        rng = np.random.default_rng(5)
        alive = sum(len(sample_snapshot(net, rng).alive_links) for _ in range(400))
        assert alive / (400 * len(net.links)) == pytest.approx(0.3, abs=0.02)

    @pytest.mark.skipif(not _slow, reason="Set CONFKEY_TEST_SLOW=1")
    def test_per_link_frequency_within_four_sigma(self):
        rounds = 10_000
        net = build_grid(5, 5, 0.3, 1.0, 1.0)
        rng = np.random.default_rng(6)
        kept = collections.Counter()
        for _ in range(rounds):
            kept.update(sample_snapshot(net, rng).alive_links)
        sigma = math.sqrt(0.3 * 0.7 / rounds)
        for link in net.links:
            assert abs(kept[link] / rounds - 0.3) <= 4 * sigma, link

    def test_adjacency_sorted(self, square):
        snap = Snapshot(parent=square, alive_links=frozenset({(0, 1), (0, 3)}))
        assert snap.adjacency[0] == (1, 3)
        assert snap.adjacency[2] == ()

    def test_residual(self, square):
        snap = Snapshot.full(square)
        rest = residual(snap, [(1, 0), (2, 3)])
        assert rest.alive_links == frozenset({(1, 2), (0, 3)})
        assert snap.alive_links == square.links

    def test_residual_rejects_dead_links(self, square):
        snap = Snapshot(parent=square, alive_links=frozenset({(0, 1)}))
        with pytest.raises(ContractViolationError, match="not alive"):
            snap.residual([(1, 2)])

    def test_snapshot_rejects_foreign_links(self, square):
        with pytest.raises(ContractViolationError, match="not links"):
            Snapshot(parent=square, alive_links=frozenset({(0, 2)}))


def test_edge_helpers():
    assert edge_key(5, 2) == (2, 5)
    assert path_edges([3, 1, 2]) == ((1, 3), (1, 2))
