from __future__ import annotations

import pytest

from confkey.core.errors import InvalidArgumentError
from confkey.network.graph import Snapshot
from confkey.routing.contraction import ContractedTree, contract_tree, expanded_tree
from confkey.routing.dump import dump_structure, dump_structures
from confkey.routing.paths import CostGraph, PathRecord
from confkey.routing.structures import Star, SteinerTree


@pytest.fixture
def spider(make_network):
    """Center 0 with arms 1-0, 3-2-0 and 6-5-4-0; node 7 hangs off node 1."""
    return make_network(
        8,
        [(0, 1), (0, 2, 0.9), (2, 3, 0.9), (0, 4), (4, 5, 0.8), (5, 6), (1, 7)],
        q=0.5,
        terminals=[1, 3, 6],
    )


def _star(net, center, arms) -> Star:
    graph = CostGraph(Snapshot.full(net))
    return Star(
        center=center,
        terminals=tuple(arm[0] for arm in arms),
        arms=tuple(graph.record(arm) for arm in arms),
        network=net,
    )


class TestStar:
    def test_properties(self, spider):
        star = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)])
        assert star.used_edges == frozenset({(0, 1), (0, 2), (2, 3), (0, 4), (4, 5), (5, 6)})
        assert star.nonleaf_nodes == (0, 2, 4, 5)
        assert star.n_nonleaf == 4
        assert star.arm_lengths == (1, 2, 3)
        assert star.arm_gammas == pytest.approx((1.0, 0.81, 0.8))

    def test_non_leaf_count_matches_arm_lengths(self, spider):
        star = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)])
        assert star.n_nonleaf == 1 + sum(n - 1 for n in star.arm_lengths)

    def test_terminal_center(self, make_network):
        net = make_network(3, [(0, 1), (0, 2)], terminals=[0, 1, 2])
        star = _star(net, 0, [(0,), (1, 0), (2, 0)])
        assert star.arm_gammas == (1.0, 1.0, 1.0)
        assert star.nonleaf_nodes == (0,)

    def test_arm_must_reach_center(self, spider):
        with pytest.raises(InvalidArgumentError, match="does not join"):
            _star(spider, 0, [(1, 0), (3, 2), (6, 5, 4, 0)])

    def test_arm_must_not_cross_a_terminal(self, make_network):
        net = make_network(5, [(0, 4), (1, 4), (1, 3), (1, 2), (2, 4)])
        with pytest.raises(InvalidArgumentError, match="crosses"):
            _star(net, 4, [(0, 4), (1, 4), (3, 1, 2, 4)])

    def test_arms_must_not_share_links(self, make_network):
        net = make_network(5, [(0, 2), (1, 2), (2, 4), (3, 4)])
        with pytest.raises(InvalidArgumentError, match="reuses a link"):
            _star(net, 4, [(0, 2, 4), (1, 2, 4), (3, 4)])

    def test_arm_count(self, spider):
        graph = CostGraph(Snapshot.full(spider))
        with pytest.raises(InvalidArgumentError, match="arms for"):
            Star(center=0, terminals=(1, 3, 6), arms=(graph.record((1, 0)),), network=spider)

    def test_as_tree(self, spider):
        star = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)])
        tree = star.as_tree()
        assert tree.edges == star.used_edges
        assert tree.nonleaf_nodes == star.nonleaf_nodes


class TestSteinerTree:
    def test_properties(self, spider):
        tree = SteinerTree(frozenset({(1, 0), (0, 2), (3, 2)}), (1, 3), spider)
        assert tree.edges == frozenset({(0, 1), (0, 2), (2, 3)})
        assert tree.non_leaf_count == 2
        assert tree.fusion_nodes == frozenset()

    def test_interior_terminal_is_fusion(self, spider):
        tree = SteinerTree(frozenset({(0, 1), (0, 2), (2, 3)}), (1, 0, 3), spider)
        assert tree.fusion_nodes == frozenset({0})

    @pytest.mark.parametrize(
        "edges,terminals,match",
        [
            ({(0, 1), (0, 2)}, (1, 3), "does not reach"),
            ({(0, 1), (0, 2), (2, 3)}, (1, 2), "non-terminal leaves"),
            ({(0, 1), (0, 2), (1, 2)}, (1, 2), "form a tree"),
            ({(0, 1)}, (1,), "at least 2"),
        ],
        ids=["missing-terminal", "stray-leaf", "cycle", "one-terminal"],
    )
    def test_rejects(self, spider, edges, terminals, match):
        with pytest.raises(InvalidArgumentError, match=match):
            SteinerTree(frozenset(edges), terminals, spider)


class TestContraction:
    def test_star_contracts_to_three_edges(self, spider):
        tree = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)]).as_tree()
        contracted = contract_tree(tree)
        assert contracted.vertices == (0, 1, 3, 6)
        assert [edge.nodes for edge in contracted.contracted_edges] == [
            (0, 1),
            (0, 2, 3),
            (0, 4, 5, 6),
        ]
        assert contracted.is_star
        assert contracted.center == 0
        assert contracted.arm_gammas() == pytest.approx((1.0, 0.81, 0.8))
        assert contracted.nonleaf_nodes == (0, 2, 4, 5)

    def test_round_trip(self, spider):
        tree = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)]).as_tree()
        assert expanded_tree(contract_tree(tree)).edges == tree.edges

    def test_path_with_interior_terminal(self, spider):
        tree = SteinerTree(frozenset({(0, 1), (0, 2), (2, 3)}), (1, 0, 3), spider)
        contracted = contract_tree(tree)
        assert contracted.vertices == (0, 1, 3)
        assert contracted.is_star
        assert contracted.center == 0
        assert contracted.arm_gammas() == pytest.approx((1.0, 1.0, 0.81))

    def test_canonical_ignores_node_ids(self):
        def tree(a, b, c, hub):
            edges = (
                PathRecord((a, hub), 1, 0.9, 0.0),
                PathRecord((b, hub), 1, 0.8, 0.0),
                PathRecord((c, hub), 1, 0.7, 0.0),
            )
            return ContractedTree((a, b, c), tuple(sorted((a, b, c, hub))), edges)

        assert tree(0, 1, 2, 3).canonical() == tree(10, 4, 7, 2).canonical()

    def test_canonical_expansion_is_refused(self, spider):
        tree = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)]).as_tree()
        with pytest.raises(InvalidArgumentError, match="canonical"):
            expanded_tree(contract_tree(tree).canonical())

    def test_rejects_edge_through_vertex(self):
        edges = (
            PathRecord((0, 1, 2), 2, 1.0, 0.0),
            PathRecord((1, 3), 1, 1.0, 0.0),
            PathRecord((2, 3), 1, 1.0, 0.0),
        )
        with pytest.raises(InvalidArgumentError, match="passes a vertex"):
            ContractedTree((0, 2, 3), (0, 1, 2, 3), edges)


class TestDump:
    def test_star(self, spider):
        star = _star(spider, 0, [(1, 0), (3, 2, 0), (6, 5, 4, 0)])
        assert dump_structure(star) == "star center=0 arms=1-0;3-2-0;6-5-4-0"

    def test_tree(self, spider):
        tree = SteinerTree(frozenset({(0, 1), (0, 2), (2, 3)}), (1, 0, 3), spider)
        assert dump_structure(tree) == "tree edges=0-1,0-2,2-3 fusion=0"

    def test_many(self, spider):
        tree = SteinerTree(frozenset({(0, 1)}), (0, 1), spider)
        assert dump_structures([tree, tree]) == "tree edges=0-1 fusion=\n" * 2
