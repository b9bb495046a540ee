"""GHZ distribution over a contracted tree.

Each contracted edge ``e`` between vertices ``v`` and ``w`` starts as a Werner
pair on qubits ``(v, e)`` and ``(w, e)``. Repeater vertices merge their
qubits by GHZ-basis measurement; terminal vertices that are interior to the
tree keep one qubit and fuse the others into it.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from typing import TYPE_CHECKING

import numpy as np

from confkey.core import settings
from confkey.core.errors import CapacityError, InvalidArgumentError
from confkey.quantum.density import (
    DensityOperator,
    Label,
    WernerParams,
    fusion_merge,
    ghz_projective_merge,
    werner_pair,
)

if TYPE_CHECKING:
    from confkey.routing.contraction import ContractedTree

logger = logging.getLogger(__name__)


def _edge_gammas(contracted: ContractedTree, edge_gammas: Sequence[float] | None) -> list[float]:
    if edge_gammas is None:
        return [edge.gamma_p for edge in contracted.contracted_edges]
    if len(edge_gammas) != len(contracted.contracted_edges):
        raise InvalidArgumentError(
            f"{len(edge_gammas)} gammas for {len(contracted.contracted_edges)} contracted edges"
        )
    return list(edge_gammas)


def _check_terminals(contracted: ContractedTree) -> None:
    n = len(contracted.terminals)
    if n > settings.MAX_TERMINALS:
        raise CapacityError("terminal set", n, settings.MAX_TERMINALS)
    if n < 2:
        raise InvalidArgumentError(f"a GHZ state needs at least 2 terminals, got {n}")


def _add_pair(
    state: DensityOperator | None, gamma: float, near: Label, far: Label
) -> DensityOperator:
    pair = werner_pair(WernerParams(gamma=gamma), (near, far))
    return pair if state is None else state.tensor(pair)


# ---------------------------------------------------------------------------
# Incremental evolution
# ---------------------------------------------------------------------------


def tree_state(
    contracted: ContractedTree,
    edge_gammas: Sequence[float] | None = None,
    *,
    root: int | None = None,
    rng: np.random.Generator | None = None,
) -> DensityOperator:
    """N-qubit state shared by the terminals, one qubit each, in terminal order.

    The tree is walked depth-first from *root* (default: the first terminal),
    adding one Werner pair at a time and merging it immediately, so the live
    state never holds more than N + 2 qubits. Passing *rng* shuffles the
    order in which children are visited.
    """
    _check_terminals(contracted)
    gammas = _edge_gammas(contracted, edge_gammas)
    terminals = set(contracted.terminals)
    root = contracted.terminals[0] if root is None else root
    if root not in terminals:
        raise InvalidArgumentError(f"root {root} is not a terminal")

    state: DensityOperator | None = None
    kept: dict[int, Label] = {}
    peak = 0
    # (vertex, edge it was reached through, qubit it holds on that edge)
    stack: list[tuple[int, int | None, Label | None]] = [(root, None, None)]
    while stack:
        v, parent_edge, held = stack.pop()
        children = [e for e in contracted.incident(v) if e != parent_edge]
        if rng is not None:
            children = [children[i] for i in rng.permutation(len(children))]
        is_terminal = v in terminals
        if not is_terminal and len(children) < 2:
            raise InvalidArgumentError(f"repeater vertex {v} must branch")

        pushed = []
        for position, e in enumerate(children):
            w = contracted.other_end(e, v)
            near, far = (v, e), (w, e)
            state = _add_pair(state, gammas[e], near, far)
            peak = max(peak, state.n_qubits)
            if held is None:
                held = near
            elif not is_terminal and position == len(children) - 1:
                rest = tuple(label for label in state.labels if label not in (held, near, far))
                state = ghz_projective_merge(state, [held, near], [rest, (far,)])
            else:
                state = fusion_merge(state, held, near, (far,))
            pushed.append((w, e, far))
        if is_terminal:
            kept[v] = held
        stack.extend(reversed(pushed))

    logger.debug("tree_state over %d edges peaked at %d qubits", len(gammas), peak)
    return state.permuted([kept[t] for t in contracted.terminals])


# ---------------------------------------------------------------------------
# Full-tensor evolution
# ---------------------------------------------------------------------------


def tree_state_full(
    contracted: ContractedTree, edge_gammas: Sequence[float] | None = None
) -> DensityOperator:
    """Same state as :func:`tree_state`, built by creating every pair up front.

    Vertices are merged in ascending id order: one k-GHZ measurement per
    repeater, k − 1 sequential fusions per interior terminal.
    """
    _check_terminals(contracted)
    gammas = _edge_gammas(contracted, edge_gammas)
    n_qubits = 2 * len(gammas)
    if n_qubits > settings.MAX_QUBITS:
        raise CapacityError("full-tensor product state", n_qubits, settings.MAX_QUBITS)

    state: DensityOperator | None = None
    component: dict[Label, frozenset[Label]] = {}
    for e, edge in enumerate(contracted.contracted_edges):
        a, b = (edge.nodes[0], e), (edge.nodes[-1], e)
        state = _add_pair(state, gammas[e], a, b)
        component[a] = component[b] = frozenset((a, b))

    def side(label: Label) -> tuple[Label, ...]:
        return tuple(sorted(component[label] - {label}))

    def join(labels: Sequence[Label], removed: set[Label]) -> None:
        merged = frozenset().union(*(component[label] for label in labels)) - removed
        for label in removed:
            component.pop(label, None)
        for label in merged:
            component[label] = merged

    terminals = set(contracted.terminals)
    for v in contracted.vertices:
        incident = sorted(contracted.incident(v))
        if len(incident) < 2:
            continue
        qubits = [(v, e) for e in incident]
        if v in terminals:
            kept, *absorbed = qubits
            for label in absorbed:
                state = fusion_merge(state, kept, label, side(label))
                join([kept, label], {label})
        else:
            state = ghz_projective_merge(state, qubits, [side(label) for label in qubits])
            join(qubits, set(qubits))

    order = [(t, min(contracted.incident(t))) for t in contracted.terminals]
    return state.permuted(order)
