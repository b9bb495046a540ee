"""Dense density operators with GHZ-basis merges and entanglement fusion.

Every qubit carries a label ``(node id, port id)``. Operations work on the
``(2,) * 2n`` tensor view of the matrix: the first n axes are row qubits, the
last n axes column qubits, both in label order.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from confkey.core import settings
from confkey.core.errors import (
    CapacityError,
    ContractViolationError,
    InvalidArgumentError,
)
from confkey.quantum.paulis import (
    CNOT,
    PAULI_I,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    computational_vector,
    ghz_basis_vector,
    ghz_ket,
)

logger = logging.getLogger(__name__)

Label = tuple[int, int]

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_TOL = 1e-9


class WernerParams(BaseModel):
    model_config = ConfigDict(frozen=True)

    gamma: float = Field(ge=0.0, le=1.0)


# ---------------------------------------------------------------------------
# Tensor helpers
# ---------------------------------------------------------------------------


def _apply(tensor: np.ndarray, n: int, op: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return ``op ρ op†`` with *op* acting on qubits *targets* (in that order)."""
    k = len(targets)
    op_t = op.reshape((2,) * (2 * k))
    inputs = list(range(k, 2 * k))
    outputs = list(range(k))

    rows = list(targets)
    out = np.tensordot(op_t, tensor, axes=(inputs, rows))
    out = np.moveaxis(out, outputs, rows)

    cols = [n + t for t in targets]
    out = np.tensordot(op_t.conj(), out, axes=(inputs, cols))
    return np.moveaxis(out, outputs, cols)


def _project(tensor: np.ndarray, n: int, vec: np.ndarray, targets: Sequence[int]) -> np.ndarray:
    """Return ``⟨v|ρ|v⟩`` over qubits *targets*, an unnormalized operator on the rest."""
    k = len(targets)
    v = vec.reshape((2,) * k)
    out = np.tensordot(v.conj(), tensor, axes=(list(range(k)), list(targets)))
    m = n - k
    cols = [m + t for t in targets]
    return np.tensordot(out, v, axes=(cols, list(range(k))))


def _hermitize(matrix: np.ndarray) -> np.ndarray:
    return 0.5 * (matrix + matrix.conj().T)


# ---------------------------------------------------------------------------
# DensityOperator
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DensityOperator:
    matrix: np.ndarray
    labels: tuple[Label, ...]

    def __post_init__(self) -> None:
        n = len(self.labels)
        if n > settings.MAX_QUBITS:
            raise CapacityError("density operator", n, settings.MAX_QUBITS)
        if self.matrix.shape != (2**n, 2**n):
            raise InvalidArgumentError(
                f"matrix shape {self.matrix.shape} does not match {n} labelled qubits"
            )
        if len(set(self.labels)) != n:
            raise InvalidArgumentError(f"qubit labels must be unique: {self.labels}")
        if settings.check_states():
            self.validate()

    @property
    def n_qubits(self) -> int:
        return len(self.labels)

    def tensor_view(self) -> np.ndarray:
        return self.matrix.reshape((2,) * (2 * self.n_qubits))

    def index(self, label: Label) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InvalidArgumentError(f"no qubit labelled {label}") from None

    def validate(self) -> None:
        """Check Hermiticity, unit trace and positivity within the stated tolerances."""
        m = self.matrix
        if not np.allclose(m, m.conj().T, rtol=0.0, atol=HERMITIAN_TOL):
            raise ContractViolationError("density operator is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise ContractViolationError(f"density operator trace is {trace}")
        lowest = float(np.linalg.eigvalsh(_hermitize(m))[0])
        if lowest < -EIGEN_TOL:
            raise ContractViolationError(f"density operator has eigenvalue {lowest}")

    def tensor(self, other: DensityOperator) -> DensityOperator:
        return DensityOperator(np.kron(self.matrix, other.matrix), self.labels + other.labels)

    def permuted(self, order: Sequence[Label]) -> DensityOperator:
        """Reorder qubits so that they follow *order*."""
        if sorted(order) != sorted(self.labels):
            raise InvalidArgumentError(f"{order} is not a permutation of {self.labels}")
        n = self.n_qubits
        idx = [self.index(label) for label in order]
        t = self.tensor_view().transpose(idx + [n + i for i in idx])
        return DensityOperator(t.reshape(2**n, 2**n), tuple(order))

    def dump(self) -> str:
        """Row-major ``row col re im`` lines for entries with magnitude above 1e-14."""
        lines = []
        for (row, col), value in np.ndenumerate(self.matrix):
            if abs(value) > 1e-14:
                lines.append(f"{row} {col} {value.real:.15g} {value.imag:.15g}")
        return "\n".join(lines) + "\n"


def _from_tensor(tensor: np.ndarray, labels: tuple[Label, ...]) -> DensityOperator:
    dim = 2 ** len(labels)
    return DensityOperator(_hermitize(tensor.reshape(dim, dim)), labels)


# ---------------------------------------------------------------------------
# Constructors
# ---------------------------------------------------------------------------


def werner_pair(
    params: WernerParams, labels: tuple[Label, Label] = ((0, 0), (1, 0))
) -> DensityOperator:
    """``γ|Φ⁺⟩⟨Φ⁺| + (1−γ)·I/4``."""
    phi = ghz_ket(2)
    matrix = params.gamma * np.outer(phi, phi.conj()) + (1.0 - params.gamma) * np.eye(4) / 4.0
    return DensityOperator(matrix.astype(complex), tuple(labels))


def ghz_density(labels: Sequence[Label]) -> DensityOperator:
    ket = ghz_ket(len(labels))
    return DensityOperator(np.outer(ket, ket.conj()), tuple(labels))


def maximally_mixed(labels: Sequence[Label]) -> DensityOperator:
    dim = 2 ** len(labels)
    return DensityOperator(np.eye(dim, dtype=complex) / dim, tuple(labels))


# ---------------------------------------------------------------------------
# Channels and measurements
# ---------------------------------------------------------------------------


def depolarize(state: DensityOperator, qubit: Label, gamma: float) -> DensityOperator:
    """``γρ + (1−γ)·tr_q(ρ)⊗I/2`` on *qubit*, written as a Pauli twirl."""
    if not 0.0 <= gamma <= 1.0:
        raise InvalidArgumentError(f"gamma must lie in [0, 1], got {gamma}")
    target = [state.index(qubit)]
    n = state.n_qubits
    t = state.tensor_view()
    twirl = sum(_apply(t, n, pauli, target) for pauli in (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z))
    return _from_tensor(gamma * t + (1.0 - gamma) / 4.0 * twirl, state.labels)


def _as_side(partner: Label | Iterable[Label]) -> tuple[Label, ...]:
    if (
        isinstance(partner, tuple)
        and len(partner) == 2
        and all(isinstance(x, (int, np.integer)) for x in partner)
    ):
        return (partner,)
    return tuple(partner)


def ghz_projective_merge(
    state: DensityOperator,
    measured: Sequence[Label],
    partners: Sequence[Label | Iterable[Label]],
) -> DensityOperator:
    """k-qubit GHZ-basis measurement on *measured* with outcome-averaged correction.

    ``partners[i]`` is the qubit (or the whole set of qubits) of the GHZ
    component that ``measured[i]`` belongs to. For outcome pattern *x* the
    qubits of every component with ``x_i = 1`` get an X; a phase outcome of 1
    puts a Z on the lowest partner label.
    """
    k = len(measured)
    if k < 2:
        raise InvalidArgumentError(f"a GHZ merge needs at least 2 qubits, got {k}")
    if len(partners) != k:
        raise InvalidArgumentError(f"{k} measured qubits but {len(partners)} partners")
    if len(set(measured)) != k:
        raise InvalidArgumentError(f"measured labels collide: {measured}")
    sides = [_as_side(p) for p in partners]
    measured_set = set(measured)
    seen: set[Label] = set()
    for side in sides:
        if not side:
            raise InvalidArgumentError("every measured qubit needs at least one partner")
        for label in side:
            if label in measured_set or label in seen:
                raise InvalidArgumentError(f"partner label {label} collides")
            seen.add(label)
            state.index(label)

    n = state.n_qubits
    m_idx = [state.index(label) for label in measured]
    remaining = tuple(label for label in state.labels if label not in measured_set)
    pos = {label: i for i, label in enumerate(remaining)}
    z_target = pos[min(seen)]
    m = len(remaining)
    t = state.tensor_view()

    acc = np.zeros((2,) * (2 * m), dtype=complex)
    for pattern in range(2 ** (k - 1)):
        bits = [0] + [(pattern >> (k - 2 - j)) & 1 for j in range(k - 1)]
        flips = [pos[label] for bit, side in zip(bits, sides) if bit for label in side]
        for phase in (0, 1):
            branch = _project(t, n, ghz_basis_vector(bits, phase), m_idx)
            for f in flips:
                branch = _apply(branch, m, PAULI_X, [f])
            if phase:
                branch = _apply(branch, m, PAULI_Z, [z_target])
            acc += branch
    return _from_tensor(acc, remaining)


def fusion_merge(
    state: DensityOperator,
    retained: Label,
    absorbed: Label,
    absorbed_side: Iterable[Label],
) -> DensityOperator:
    """CNOT(retained → absorbed), Z-measure *absorbed*, X-correct its component on outcome 1."""
    side = tuple(absorbed_side)
    if retained == absorbed:
        raise InvalidArgumentError(f"retained and absorbed are both {retained}")
    if not side:
        raise InvalidArgumentError("the absorbed component needs at least one other qubit")
    if retained in side or absorbed in side:
        raise InvalidArgumentError("absorbed_side must not contain the fused qubits")
    r_idx, a_idx = state.index(retained), state.index(absorbed)
    for label in side:
        state.index(label)

    n = state.n_qubits
    t = _apply(state.tensor_view(), n, CNOT, [r_idx, a_idx])
    remaining = tuple(label for label in state.labels if label != absorbed)
    pos = {label: i for i, label in enumerate(remaining)}
    m = len(remaining)

    acc = np.zeros((2,) * (2 * m), dtype=complex)
    for outcome in (0, 1):
        branch = _project(t, n, computational_vector(outcome), [a_idx])
        if outcome:
            for label in side:
                branch = _apply(branch, m, PAULI_X, [pos[label]])
        acc += branch
    return _from_tensor(acc, remaining)


# ---------------------------------------------------------------------------
# Fidelity
# ---------------------------------------------------------------------------


def ghz_fidelity(state: DensityOperator) -> float:
    """``⟨GHZ|ρ|GHZ⟩`` with qubits taken in label order."""
    ket = ghz_ket(state.n_qubits)
    return float(np.real(ket.conj() @ state.matrix @ ket))


def gamma_to_fidelity(gamma: float) -> float:
    if not 0.0 <= gamma <= 1.0:
        raise InvalidArgumentError(f"gamma must lie in [0, 1], got {gamma}")
    return (3.0 * gamma + 1.0) / 4.0


def fidelity_to_gamma(fidelity: float) -> float:
    if not 0.25 <= fidelity <= 1.0:
        raise InvalidArgumentError(f"Werner fidelity must lie in [1/4, 1], got {fidelity}")
    return (4.0 * fidelity - 1.0) / 3.0
