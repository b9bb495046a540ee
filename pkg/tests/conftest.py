"""Shared test fixtures available to all test modules."""

from __future__ import annotations

from pathlib import Path

import pytest

from confkey.network.graph import Network, build_grid
from confkey.routing.evaluate import clear_tree_cache


@pytest.fixture(autouse=True)
def _fresh_tree_cache():
    clear_tree_cache()
    yield
    clear_tree_cache()


@pytest.fixture
def make_network():
    """Factory: ``make_network(n, [(u, v), (u, v, gamma), ...], p=.., gamma=.., q=..)``."""

    def _make(
        n_nodes: int,
        links,
        *,
        p: float = 1.0,
        gamma: float = 1.0,
        q: float | dict[int, float] = 1.0,
        terminals=(),
    ) -> Network:
        table = {}
        for link in links:
            u, v, *rest = link
            table[(u, v)] = (p, rest[0] if rest else gamma)
        return Network.from_links(n_nodes, table, q, terminals)

    return _make


@pytest.fixture
def square(make_network) -> Network:
    """4-cycle 0-1-2-3-0 with unit parameters."""
    return make_network(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def grid7() -> Network:
    return build_grid(7, 7, p=1.0, gamma=1.0, q=1.0)


@pytest.fixture
def config_text() -> str:
    """A small but complete experiment config on a 5x5 grid."""
    return "\n".join(
        [
            "# small sweep",
            "topology.kind = grid",
            "topology.width = 5",
            "topology.height = 5",
            "layout.kind = bet",
            "protocol.n_parties = 3",
            "params.p = 0.85",
            "params.q = 0.9",
            "params.gamma_list = 0.99,1.0",
            "routing.strategy = dynamic-single,fixed-single",
            "sim.rounds = 12",
            "sim.graph_seeds = 1",
            "sim.master_seed = 7",
            "",
        ]
    )


@pytest.fixture
def config_file(tmp_path: Path, config_text: str) -> Path:
    path = tmp_path / "experiment.conf"
    path.write_text(config_text + f"output.path = {tmp_path / 'results.csv'}\n")
    return path
