"""Terminal layouts: grid presets, explicit node lists and seeded random picks."""

from __future__ import annotations

import enum
import logging
from functools import lru_cache

import numpy as np
import yaml
from pydantic import BaseModel, Field, model_validator

from confkey.core.errors import InvalidArgumentError
from confkey.core.paths import package_data
from confkey.network.graph import Network

logger = logging.getLogger(__name__)

_PRESET_FILE = "layouts.yaml"
_REFERENCE_GRID = "7x7"
_TERMINAL_STREAM = 1


class LayoutKind(str, enum.Enum):
    BET = "bet"
    DALET = "dalet"
    GIML = "giml"
    GIML_INCREMENTAL = "giml-incremental"
    EXPLICIT = "explicit"
    RANDOM = "random"


GRID_PRESETS = (LayoutKind.BET, LayoutKind.DALET, LayoutKind.GIML, LayoutKind.GIML_INCREMENTAL)


class LayoutSpec(BaseModel):
    """Where the N parties sit.

    ``nodes`` is only read for the explicit kind; ``seed`` only for the
    random kind (defaults to the topology seed when left unset).
    """

    kind: LayoutKind
    n_parties: int = Field(ge=3, le=8)
    nodes: list[int] = Field(default_factory=list)
    seed: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_nodes(self) -> LayoutSpec:
        if self.kind is LayoutKind.EXPLICIT:
            if len(self.nodes) != self.n_parties:
                raise ValueError(
                    f"explicit layout lists {len(self.nodes)} nodes for {self.n_parties} parties"
                )
            if len(set(self.nodes)) != len(self.nodes):
                raise ValueError(f"explicit layout nodes must be distinct: {self.nodes}")
        return self


# ---------------------------------------------------------------------------
# Preset table
# ---------------------------------------------------------------------------


@lru_cache(maxsize=1)
def load_presets() -> dict[str, dict[str, list[tuple[int, int]]]]:
    """Read the preset table shipped with the package."""
    path = package_data(_PRESET_FILE)
    raw = yaml.safe_load(path.read_text(encoding="utf-8"))
    return {
        grid: {kind: [tuple(cell) for cell in cells] for kind, cells in kinds.items()}
        for grid, kinds in raw.items()
    }


def _scaled(cells: list[tuple[int, int]], width: int, height: int) -> list[tuple[int, int]]:
    ref_w, ref_h = (int(x) for x in _REFERENCE_GRID.split("x"))
    return [
        (round(r * (height - 1) / (ref_h - 1)), round(c * (width - 1) / (ref_w - 1)))
        for r, c in cells
    ]


def preset_cells(
    kind: LayoutKind, n_parties: int, width: int, height: int
) -> list[tuple[int, int]]:
    """Grid cells of a preset layout for *n_parties* on a width x height grid."""
    if kind not in GRID_PRESETS:
        raise InvalidArgumentError(f"{kind.value} is not a grid preset")
    presets = load_presets()
    key = f"{width}x{height}"
    table = presets.get(key)
    scale = table is None
    if scale:
        table = presets[_REFERENCE_GRID]
        logger.debug("No preset for %s, scaling the %s cells", key, _REFERENCE_GRID)

    if kind is LayoutKind.GIML_INCREMENTAL:
        cells = table[LayoutKind.GIML.value] + table[LayoutKind.GIML_INCREMENTAL.value]
    else:
        cells = table[kind.value]
    if n_parties > len(cells):
        raise InvalidArgumentError(
            f"{kind.value} places at most {len(cells)} terminals, asked for {n_parties}"
        )
    cells = cells[:n_parties]
    if scale:
        cells = _scaled(cells, width, height)
    if len(set(cells)) != len(cells):
        raise InvalidArgumentError(
            f"{kind.value} cells collide on a {width}x{height} grid: {cells}"
        )
    return cells


# ---------------------------------------------------------------------------
# Applying a layout
# ---------------------------------------------------------------------------


def random_terminals(network: Network, n_parties: int, seed: int) -> list[int]:
    """Seeded uniform choice without replacement.

    The choice for N parties is a prefix of the choice for any larger N.
    """
    if n_parties > network.n_nodes:
        raise InvalidArgumentError(
            f"cannot place {n_parties} terminals on {network.n_nodes} nodes"
        )
    rng = np.random.default_rng(np.random.SeedSequence([seed, _TERMINAL_STREAM]))
    order = rng.permutation(network.n_nodes)
    return [int(node) for node in order[:n_parties]]


def apply_layout(network: Network, layout: LayoutSpec, *, seed: int | None = None) -> Network:
    """Return *network* with its terminal list replaced according to *layout*."""
    if layout.n_parties > network.n_nodes:
        raise InvalidArgumentError(
            f"{layout.n_parties} parties do not fit on {network.n_nodes} nodes"
        )

    if layout.kind is LayoutKind.EXPLICIT:
        for node in layout.nodes:
            if not 0 <= node < network.n_nodes:
                raise InvalidArgumentError(f"node {node} is outside the network")
        terminals = list(layout.nodes)
    elif layout.kind is LayoutKind.RANDOM:
        chosen_seed = layout.seed if layout.seed is not None else seed
        if chosen_seed is None:
            raise InvalidArgumentError("a random layout needs a seed")
        terminals = random_terminals(network, layout.n_parties, chosen_seed)
    else:
        if network.shape is None:
            raise InvalidArgumentError(f"the {layout.kind.value} layout needs a grid topology")
        width, height = network.shape
        cells = preset_cells(layout.kind, layout.n_parties, width, height)
        terminals = [network.node_at(row, col) for row, col in cells]

    logger.debug("Layout %s -> terminals %s", layout.kind.value, terminals)
    return network.with_terminals(terminals)
