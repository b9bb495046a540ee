from __future__ import annotations

import os

import numpy as np
import pytest

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Snapshot, build_grid, sample_snapshot
from confkey.network.layouts import LayoutKind, LayoutSpec, apply_layout
from confkey.routing.evaluate import structure_score
from confkey.routing.paths import CostGraph
from confkey.routing.stars import (
    _orderings,
    _stars_at,
    find_best_star,
    pack_stars,
    star_from_tree,
)
from confkey.routing.steiner import steiner_tree
from confkey.routing.structures import SteinerTree

_slow = os.environ.get("CONFKEY_TEST_SLOW", "").lower() in ("1", "true", "yes")

# Terminals 0, 1, 2. Center 3 reaches 2 over 3-5-4-2; center 6 touches all three.
TWO_CENTERS = [(0, 3), (1, 3), (3, 5), (5, 4), (4, 2), (0, 6), (1, 6), (2, 6)]


@pytest.fixture
def noisy_grid(make_network):
    rng = np.random.default_rng(11)
    grid = build_grid(4, 4, p=1.0, gamma=1.0, q=1.0)
    links = [(u, v, float(rng.uniform(0.9, 1.0))) for u, v in grid.sorted_links]
    return make_network(16, links, q=0.9)


class TestBestStar:
    def test_triangle_prefers_lowest_center(self, make_network):
        net = make_network(3, [(0, 1), (1, 2), (0, 2)], gamma=0.95)
        star = find_best_star(Snapshot.full(net), (0, 1, 2))
        assert star.center == 0
        assert star.arm_gammas == pytest.approx((1.0, 0.95, 0.95))

    def test_link_survival_prefers_fewer_links(self, make_network):
        net = make_network(7, TWO_CENTERS, p=0.85)
        star = find_best_star(Snapshot.full(net), (0, 1, 2), link_survival=True)
        assert star.center == 6
        assert len(star.used_edges) == 3

    def test_without_survival_ties_go_to_lowest_center(self, make_network):
        net = make_network(7, TWO_CENTERS, p=0.85)
        star = find_best_star(Snapshot.full(net), (0, 1, 2))
        assert star.center == 0

    @pytest.mark.parametrize("terminals", [(0, 3, 13), (0, 5, 10, 15), (1, 4, 11, 14, 6)])
    def test_no_center_beats_the_winner(self, noisy_grid, terminals):
        graph = CostGraph(Snapshot.full(noisy_grid))
        best = find_best_star(Snapshot.full(noisy_grid), terminals)
        best_score = structure_score(best)
        for center in range(noisy_grid.n_nodes):
            for star in _stars_at(graph, terminals, center):
                assert structure_score(star) <= best_score + 1e-12

    @pytest.mark.parametrize("seed", range(5))
    def test_three_party_star_at_least_tree(self, seed):
        net = apply_layout(
            build_grid(7, 7, p=0.8, gamma=0.98, q=0.9), LayoutSpec(kind=LayoutKind.BET, n_parties=3)
        )
        snapshot = sample_snapshot(net, np.random.default_rng(seed))
        tree = steiner_tree(snapshot, net.terminals)
        star = find_best_star(snapshot, net.terminals)
        if tree is None:
            assert star is None
            return
        assert structure_score(star) >= structure_score(tree) - 1e-12

    @pytest.mark.skipif(not _slow, reason="Set CONFKEY_TEST_SLOW=1")
    def test_three_party_star_at_least_tree_many_snapshots(self):
        net = apply_layout(
            build_grid(7, 7, p=0.8, gamma=0.98, q=0.9), LayoutSpec(kind=LayoutKind.BET, n_parties=3)
        )
        rng = np.random.default_rng(500)
        for _ in range(500):
            snapshot = sample_snapshot(net, rng)
            tree = steiner_tree(snapshot, net.terminals)
            star = find_best_star(snapshot, net.terminals)
            if tree is None:
                assert star is None
                continue
            assert structure_score(star) >= structure_score(tree) - 1e-12

    def test_none_when_cut_off(self, square):
        snapshot = Snapshot(parent=square, alive_links=frozenset({(0, 1), (1, 2)}))
        assert find_best_star(snapshot, (0, 1, 3)) is None

    @pytest.mark.parametrize(
        "terminals,match",
        [((0,), "at least 2"), ((0, 1, 1), "distinct")],
        ids=["one", "duplicate"],
    )
    def test_rejects_terminals(self, square, terminals, match):
        with pytest.raises(InvalidArgumentError, match=match):
            find_best_star(Snapshot.full(square), terminals)


class TestHelpers:
    def test_orderings(self):
        assert len(_orderings(3)) == 6
        assert len(_orderings(4)) == 24
        assert _orderings(5) == [
            (0, 1, 2, 3, 4),
            (1, 2, 3, 4, 0),
            (2, 3, 4, 0, 1),
            (3, 4, 0, 1, 2),
            (4, 0, 1, 2, 3),
        ]

    def test_stars_at_avoids_other_terminals(self, make_network):
        net = make_network(7, TWO_CENTERS)
        graph = CostGraph(Snapshot.full(net))
        stars = _stars_at(graph, (0, 1, 2), 3)
        assert stars
        for star in stars:
            assert star.arms[2].nodes == (2, 4, 5, 3)

    def test_star_from_spider(self, make_network):
        net = make_network(7, TWO_CENTERS)
        tree = SteinerTree(frozenset({(0, 6), (1, 6), (2, 6)}), (0, 1, 2), net)
        star = star_from_tree(CostGraph(Snapshot.full(net)), tree)
        assert star.center == 6
        assert [arm.nodes for arm in star.arms] == [(0, 6), (1, 6), (2, 6)]

    def test_star_from_branching_tree(self, make_network):
        edges = [(0, 4), (1, 4), (4, 5), (2, 5), (3, 5)]
        net = make_network(6, edges)
        tree = SteinerTree(frozenset(edges), (0, 1, 2, 3), net)
        assert star_from_tree(CostGraph(Snapshot.full(net)), tree) is None


class TestPacking:
    def test_bet_layout_packs_disjoint_stars(self, grid7):
        net = apply_layout(grid7, LayoutSpec(kind=LayoutKind.BET, n_parties=3))
        stars = pack_stars(Snapshot.full(net), net.terminals)
        assert 1 <= len(stars) <= 4
        used: set = set()
        for star in stars:
            assert not used & star.used_edges
            used |= star.used_edges
