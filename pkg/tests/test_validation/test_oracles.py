from __future__ import annotations

import math

import numpy as np
import pytest

from confkey.validation.oracles import (
    chain_star,
    check_entropy_endpoints,
    check_merge_order,
    check_pauli_expansion,
    check_star_equivalence,
    check_success_identity,
    random_contracted_tree,
    run_checks,
)


class TestBuilders:
    def test_chain_star(self):
        star = chain_star([[0.9, 0.8], [0.95], [1.0, 1.0, 1.0]], q=0.7)
        assert star.center == 0
        assert star.arm_lengths == (2, 1, 3)
        assert star.arm_gammas == pytest.approx((0.72, 0.95, 1.0))
        assert star.n_nonleaf == 1 + 1 + 2
        assert star.network.q(0) == 0.7

    @pytest.mark.parametrize("n_vertices", [3, 4, 5, 6])
    def test_random_tree_leaves_are_terminals(self, n_vertices):
        rng = np.random.default_rng(n_vertices)
        tree = random_contracted_tree(rng, n_vertices)
        assert len(tree.vertices) == n_vertices
        for v in tree.vertices:
            if tree.degree(v) <= 2:
                assert v in tree.terminals
        assert tree.fusion_nodes == {t for t in tree.terminals if tree.degree(t) >= 2}


class TestChecks:
    def test_all_pass(self):
        results = run_checks(draws=20)
        assert len(results) == 5
        assert all(r.passed for r in results), [r for r in results if not r.passed]

    def test_star_equivalence(self):
        result = check_star_equivalence(draws=20, seed=3)
        assert result.passed
        assert result.max_deviation <= 1e-10

    def test_detects_wrong_path_product(self):
        result = check_star_equivalence(draws=5, path_gamma_fn=lambda gs: math.prod(gs) * 0.99)
        assert not result.passed
        assert result.max_deviation > 1e-4

    def test_injected_bug_fails_only_that_check(self):
        results = run_checks(draws=5, path_gamma_fn=lambda gs: math.prod(gs) * 0.99)
        assert [r.passed for r in results] == [False, True, True, True, True]

    def test_pauli_expansion(self):
        assert check_pauli_expansion((0.8, 0.9, 0.97)).passed

    def test_merge_order(self):
        assert check_merge_order(trees=3, seed=5).passed

    def test_success_identity(self):
        assert check_success_identity(stars=10).passed

    def test_entropy_endpoints_are_exact(self):
        result = check_entropy_endpoints()
        assert result.passed
        assert result.max_deviation == 0.0
