from __future__ import annotations

import pytest

from confkey.core.errors import ContractViolationError, InvalidArgumentError
from confkey.network.graph import Snapshot
from confkey.network.layouts import LayoutKind, LayoutSpec, apply_layout
from confkey.routing.planner import (
    Plan,
    Strategy,
    StructureFamily,
    make_plan,
    plan_dynamic,
    plan_fixed,
    route_snapshot,
)
from confkey.routing.structures import Star, SteinerTree

TWO_CENTERS = [(0, 3), (1, 3), (3, 5), (5, 4), (4, 2), (0, 6), (1, 6), (2, 6)]


@pytest.fixture
def bet_grid(grid7):
    return apply_layout(grid7, LayoutSpec(kind=LayoutKind.BET, n_parties=3))


class TestStrategy:
    @pytest.mark.parametrize(
        "strategy,fixed,multi",
        [
            (Strategy.FIXED_SINGLE, True, False),
            (Strategy.FIXED_MULTI, True, True),
            (Strategy.DYNAMIC_SINGLE, False, False),
            (Strategy.DYNAMIC_MULTI, False, True),
        ],
    )
    def test_flags(self, strategy, fixed, multi):
        assert strategy.is_fixed is fixed
        assert strategy.is_multi is multi

    def test_from_config_value(self):
        assert Strategy("dynamic-multi") is Strategy.DYNAMIC_MULTI

    @pytest.mark.parametrize(
        "family,n,expected",
        [
            (StructureFamily.AUTO, 3, StructureFamily.STAR),
            (StructureFamily.AUTO, 4, StructureFamily.TREE),
            (StructureFamily.STAR, 5, StructureFamily.STAR),
            (StructureFamily.TREE, 3, StructureFamily.TREE),
        ],
    )
    def test_family_resolution(self, family, n, expected):
        assert family.resolve(n) is expected


class TestPlan:
    def test_dynamic_plan_carries_no_structures(self, make_network):
        net = make_network(3, [(0, 1), (0, 2)])
        tree = SteinerTree(frozenset({(0, 1), (0, 2)}), (1, 2), net)
        with pytest.raises(ContractViolationError, match="carry no structures"):
            Plan(Strategy.DYNAMIC_SINGLE, StructureFamily.AUTO, (1, 2), (tree,))

    def test_structures_must_be_disjoint(self, make_network):
        net = make_network(3, [(0, 1), (0, 2)])
        tree = SteinerTree(frozenset({(0, 1), (0, 2)}), (1, 2), net)
        with pytest.raises(ContractViolationError, match="edge-disjoint"):
            Plan(Strategy.FIXED_MULTI, StructureFamily.AUTO, (1, 2), (tree, tree))

    def test_fixed_single(self, bet_grid):
        plan = make_plan(bet_grid, Strategy.FIXED_SINGLE)
        assert plan.terminals == bet_grid.terminals
        assert len(plan.structures) == 1
        assert isinstance(plan.structures[0], Star)

    def test_fixed_multi(self, bet_grid):
        plan = make_plan(bet_grid, Strategy.FIXED_MULTI)
        assert len(plan.structures) >= 2

    def test_fixed_tree_family(self, bet_grid):
        plan = make_plan(bet_grid, Strategy.FIXED_SINGLE, family=StructureFamily.TREE)
        assert isinstance(plan.structures[0], SteinerTree)

    def test_dynamic(self, bet_grid):
        plan = make_plan(bet_grid, Strategy.DYNAMIC_MULTI, q=0.9)
        assert plan.structures == ()
        assert plan.q == 0.9

    def test_fixed_plan_weighs_link_survival(self, make_network):
        net = make_network(7, TWO_CENTERS, p=0.85, terminals=[0, 1, 2])
        plan = make_plan(net, Strategy.FIXED_SINGLE)
        assert plan.structures[0].center == 6

    def test_fixed_plan_may_be_empty(self, make_network):
        net = make_network(3, [(0, 1, 0.0), (1, 2)], terminals=[0, 2])
        assert make_plan(net, Strategy.FIXED_MULTI).structures == ()

    def test_strategy_kind_checked(self, bet_grid):
        with pytest.raises(InvalidArgumentError, match="not a fixed strategy"):
            plan_fixed(bet_grid, bet_grid.terminals, Strategy.DYNAMIC_SINGLE)
        with pytest.raises(InvalidArgumentError, match="not a dynamic strategy"):
            plan_dynamic(bet_grid.terminals, Strategy.FIXED_SINGLE)


class TestRouteSnapshot:
    def test_single_and_multi(self, bet_grid):
        snapshot = Snapshot.full(bet_grid)
        single = route_snapshot(snapshot, bet_grid.terminals, multi=False)
        multi = route_snapshot(snapshot, bet_grid.terminals, multi=True)
        assert len(single) == 1
        assert len(multi) >= len(single)
        assert multi[0] == single[0]

    def test_four_parties_route_trees(self, grid7):
        spec = LayoutSpec(kind=LayoutKind.EXPLICIT, n_parties=4, nodes=[8, 12, 36, 40])
        net = apply_layout(grid7, spec)
        routed = route_snapshot(Snapshot.full(net), net.terminals, multi=True)
        assert routed
        assert all(isinstance(s, SteinerTree) for s in routed)
