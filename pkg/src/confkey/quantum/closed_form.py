"""Error rates of distributed GHZ states.

Stars have a closed form in the per-arm depolarizing parameters; any other
state is measured directly through its Pauli expectations.
"""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from confkey.core.errors import InvalidArgumentError
from confkey.quantum.density import DensityOperator

logger = logging.getLogger(__name__)

RATE_SLACK = 1e-12


@dataclass(frozen=True)
class ErrorRates:
    """X-basis error across all parties and Z-basis error per Bob."""

    q_x: float
    q_ab: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.q_ab:
            raise InvalidArgumentError("error rates need at least one Bob")
        for value in (self.q_x, *self.q_ab):
            if not 0.0 <= value <= 1.0:
                raise InvalidArgumentError(f"error rate {value} outside [0, 1]")

    @property
    def worst_q_ab(self) -> float:
        return max(self.q_ab)


def _check_gammas(gammas: Sequence[float]) -> None:
    for g in gammas:
        if not 0.0 <= g <= 1.0:
            raise InvalidArgumentError(f"gamma must lie in [0, 1], got {g}")


def _clip(value: float) -> float:
    return min(1.0, max(0.0, value))


# ---------------------------------------------------------------------------
# Closed forms
# ---------------------------------------------------------------------------


def path_gamma(gammas: Sequence[float]) -> float:
    """Product of the link parameters along a swapped path."""
    if len(gammas) == 0:
        raise InvalidArgumentError("path_gamma needs at least one link")
    _check_gammas(gammas)
    return math.prod(gammas)


def star_error_rates(gamma_leader: float, gamma_bobs: Sequence[float]) -> ErrorRates:
    if len(gamma_bobs) < 1:
        raise InvalidArgumentError("a star needs at least one Bob")
    _check_gammas([gamma_leader, *gamma_bobs])
    q_ab = tuple(_clip((1.0 - gamma_leader * g) / 2.0) for g in gamma_bobs)
    q_x = _clip((1.0 - gamma_leader * math.prod(gamma_bobs)) / 2.0)
    return ErrorRates(q_x=q_x, q_ab=q_ab)


def star_rates_by_leader(arm_gammas: Sequence[float]) -> dict[int, ErrorRates]:
    """Error rates for every leader choice on a star with the given arm γ_P.

    A terminal acting as the center contributes an arm of γ = 1.
    """
    if len(arm_gammas) < 2:
        raise InvalidArgumentError("a star needs at least two terminals")
    return {
        i: star_error_rates(g, [b for j, b in enumerate(arm_gammas) if j != i])
        for i, g in enumerate(arm_gammas)
    }


def star_fidelity(gammas: Sequence[float]) -> float:
    """GHZ fidelity of an ideal N-GHZ with one depolarizing channel per qubit."""
    n = len(gammas)
    if n < 2:
        raise InvalidArgumentError("star_fidelity needs at least two qubits")
    _check_gammas(gammas)
    even = 0.0
    for size in range(0, n + 1, 2):
        for subset in itertools.combinations(gammas, size):
            even += math.prod(subset)
    return (even + 2 ** (n - 1) * math.prod(gammas)) / 2**n


# ---------------------------------------------------------------------------
# From a density operator
# ---------------------------------------------------------------------------


def _bit(index: np.ndarray, qubit: int, n: int) -> np.ndarray:
    return (index >> (n - 1 - qubit)) & 1


def error_rates_from_state(state: DensityOperator, leader_index: int) -> ErrorRates:
    """Q_X from ``⟨X^⊗N⟩`` and Q_{A,B_i} from ``⟨Z_A Z_{B_i}⟩``, qubits in label order."""
    n = state.n_qubits
    if n < 2:
        raise InvalidArgumentError(f"need at least 2 terminal qubits, got {n}")
    if not 0 <= leader_index < n:
        raise InvalidArgumentError(f"leader index {leader_index} outside 0..{n - 1}")

    index = np.arange(2**n)
    diagonal = np.real(np.diag(state.matrix))
    leader_bits = _bit(index, leader_index, n)
    q_ab = []
    for bob in range(n):
        if bob == leader_index:
            continue
        parity = leader_bits ^ _bit(index, bob, n)
        zz = float(np.sum(diagonal * (1 - 2 * parity)))
        q_ab.append(_clip((1.0 - zz) / 2.0))

    mask = 2**n - 1
    xx = float(np.real(np.sum(state.matrix[index, index ^ mask])))
    q_x = _clip((1.0 - xx) / 2.0)
    return ErrorRates(q_x=q_x, q_ab=tuple(q_ab))


def rates_by_leader_from_state(state: DensityOperator) -> dict[int, ErrorRates]:
    return {i: error_rates_from_state(state, i) for i in range(state.n_qubits)}
