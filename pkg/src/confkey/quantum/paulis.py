"""Pauli matrices and GHZ kets in big-endian qubit order (qubit 0 is the most significant bit)."""

from __future__ import annotations

from collections.abc import Sequence
from functools import reduce

import numpy as np

from confkey.core.errors import InvalidArgumentError

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = {"I": PAULI_I, "X": PAULI_X, "Y": PAULI_Y, "Z": PAULI_Z}

CNOT = np.array(
    [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]],
    dtype=complex,
)


def pauli_operator(word: str, sign: float = 1.0) -> np.ndarray:
    """Dense ``sign * P_0 ⊗ P_1 ⊗ ...`` for a word such as ``"XYY"``."""
    if not word:
        raise InvalidArgumentError("empty Pauli word")
    try:
        factors = [PAULIS[ch] for ch in word.upper()]
    except KeyError as exc:
        raise InvalidArgumentError(f"not a Pauli word: {word!r}") from exc
    return sign * reduce(np.kron, factors)


def basis_index(bits: Sequence[int]) -> int:
    index = 0
    for bit in bits:
        index = (index << 1) | (bit & 1)
    return index


def ghz_basis_vector(bits: Sequence[int], phase: int) -> np.ndarray:
    """``(|x⟩ + (-1)^phase |x̄⟩) / √2`` for the bit pattern *x*."""
    k = len(bits)
    vec = np.zeros(2**k, dtype=complex)
    index = basis_index(bits)
    vec[index] = 1.0 / np.sqrt(2.0)
    vec[index ^ (2**k - 1)] = (-1.0) ** phase / np.sqrt(2.0)
    return vec


def ghz_ket(n_qubits: int) -> np.ndarray:
    """The ideal N-GHZ state ``(|0…0⟩ + |1…1⟩) / √2``."""
    if n_qubits < 1:
        raise InvalidArgumentError(f"a GHZ state needs at least one qubit, got {n_qubits}")
    return ghz_basis_vector([0] * n_qubits, 0)


def computational_vector(bit: int) -> np.ndarray:
    vec = np.zeros(2, dtype=complex)
    vec[bit] = 1.0
    return vec
