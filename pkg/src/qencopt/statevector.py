"""Dense statevector oracle.

Used as the independent check for the symbolic stabilizer machinery and the
rewrite rules. Qubit 0 is the most significant bit of a basis index, so
``|10>`` means qubit 0 is set.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Gate, GateKind, QubitInit, require_valid

MAX_QUBITS = 12
NORM_TOL = 1e-9

_S2 = 1 / np.sqrt(2)
SINGLE_QUBIT = {
    GateKind.H: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.array([[1, 0], [0, -1]], dtype=complex),
    GateKind.S: np.array([[1, 0], [0, 1j]], dtype=complex),
    GateKind.SDG: np.array([[1, 0], [0, -1j]], dtype=complex),
}
_CONTROLLED = {GateKind.CNOT: GateKind.X, GateKind.CZ: GateKind.Z, GateKind.CY: GateKind.Y}
_INIT_VEC = {
    QubitInit.ZERO: np.array([1, 0], dtype=complex),
    QubitInit.ONE: np.array([0, 1], dtype=complex),
    QubitInit.PLUS: np.array([_S2, _S2], dtype=complex),
}


def two_qubit_matrix(kind: GateKind) -> np.ndarray:
    """4x4 matrix with operand 0 as the high bit."""
    if kind is GateKind.SWAP:
        m = np.zeros((4, 4), dtype=complex)
        for a in range(2):
            for b in range(2):
                m[2 * b + a, 2 * a + b] = 1
        return m
    u = SINGLE_QUBIT[_CONTROLLED[kind]]
    m = np.eye(4, dtype=complex)
    m[2:, 2:] = u
    return m


def gate_matrix(gate: Gate) -> np.ndarray:
    if gate.is_two_qubit:
        return two_qubit_matrix(gate.kind)
    return SINGLE_QUBIT[gate.kind]


def apply_gate(state: np.ndarray, gate: Gate, n: int) -> np.ndarray:
    """Apply ``gate`` to an ``n``-qubit state (or a batch in trailing axes)."""
    k = len(gate.qubits)
    psi = state.reshape((2,) * n + (-1,))
    u = gate_matrix(gate).reshape((2,) * (2 * k))
    psi = np.tensordot(u, psi, axes=(list(range(k, 2 * k)), list(gate.qubits)))
    # tensordot puts the gate's output axes first; move them back.
    psi = np.moveaxis(psi, list(range(k)), list(gate.qubits))
    return psi.reshape(state.shape)


def _check_width(n: int) -> None:
    if n > MAX_QUBITS:
        raise ValueError(f"dense simulation limited to {MAX_QUBITS} qubits, got {n}")


def unitary(circuit: Circuit) -> np.ndarray:
    """Full ``2**n x 2**n`` unitary of the gate list (inits are ignored)."""
    require_valid(circuit)
    n = circuit.width
    _check_width(n)
    u = np.eye(2 ** n, dtype=complex)
    for gate in circuit.gates:
        u = apply_gate(u, gate, n)
    return u


@dataclass(frozen=True)
class StateVector:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        _check_width(self.n)
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape != (2 ** self.n,):
            raise ValueError(f"expected {2 ** self.n} amplitudes, got {amps.size}")
        if abs(np.linalg.norm(amps) - 1) > NORM_TOL:
            raise ValueError("state is not normalized")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def expectation(self, operator: np.ndarray) -> complex:
        return complex(np.vdot(self.amplitudes, operator @ self.amplitudes))

    def fidelity(self, other: StateVector) -> float:
        return float(abs(np.vdot(self.amplitudes, other.amplitudes)) ** 2)


def initial_state(circuit: Circuit, data_state=None) -> np.ndarray:
    data = circuit.data_qubits
    if data_state is None:
        data_state = np.zeros(2 ** len(data), dtype=complex)
        data_state[0] = 1
    data_state = np.asarray(data_state, dtype=complex).reshape(-1)
    if data_state.size != 2 ** len(data):
        raise ValueError(f"data state needs {2 ** len(data)} amplitudes for {len(data)} data qubits")
    if abs(np.linalg.norm(data_state) - 1) > NORM_TOL:
        raise ValueError("input data state is not normalized")
    psi = data_state.reshape((2,) * len(data)) if data else data_state.reshape(())
    axes = list(data)
    for q, init in enumerate(circuit.inits):
        if init is QubitInit.DATA:
            continue
        psi = np.multiply.outer(psi, _INIT_VEC[init])
        axes.append(q)
    # axes[i] is the qubit held by tensor axis i; reorder into qubit order.
    psi = np.transpose(psi, np.argsort(axes)) if axes else psi
    return np.ascontiguousarray(psi).reshape(-1)


def simulate(circuit: Circuit, data_state=None) -> StateVector:
    """Evolve the declared initial state (Data qubits from ``data_state``)."""
    require_valid(circuit)
    n = circuit.width
    _check_width(n)
    psi = initial_state(circuit, data_state)
    for gate in circuit.gates:
        psi = apply_gate(psi, gate, n)
    return StateVector(n, psi)


def equal_up_to_global_phase(a: np.ndarray, b: np.ndarray, tol: float = 1e-9) -> bool:
    a = np.asarray(a).reshape(-1)
    b = np.asarray(b).reshape(-1)
    idx = int(np.argmax(np.abs(b)))
    if abs(b[idx]) < tol:
        return bool(np.allclose(a, b, atol=tol))
    ratio = a[idx] / b[idx]
    if abs(abs(ratio) - 1) > tol:
        return False
    return bool(np.allclose(a, ratio * b, atol=tol))
