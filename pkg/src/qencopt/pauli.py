"""Pauli operators in binary symplectic form with exact phases.

A :class:`PauliString` represents ``i**phase * P_0 (x) P_1 (x) ...`` where qubit
``j`` carries I/X/Z/Y for ``(x_j, z_j)`` = (0,0)/(1,0)/(0,1)/(1,1) and Y is
the Hermitian Pauli Y.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .circuit import Circuit, Gate, GateKind, require_valid

_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}
_CHAR = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _CHAR.items()}


def _g(x1: int, z1: int, x2: int, z2: int) -> int:
    # Exponent of i picked up by the single-qubit product P1 * P2.
    if not x1 and not z1:
        return 0
    if x1 and z1:
        return z2 - x2
    if x1:
        return z2 * (2 * x2 - 1)
    return x2 * (1 - 2 * z2)


@dataclass(frozen=True)
class PauliString:
    x: tuple[int, ...]
    z: tuple[int, ...]
    phase: int = 0

    def __post_init__(self):
        x = tuple(int(b) & 1 for b in self.x)
        z = tuple(int(b) & 1 for b in self.z)
        if len(x) != len(z):
            raise ValueError("x and z parts differ in length")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "phase", int(self.phase) % 4)

    @property
    def n(self) -> int:
        return len(self.x)

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        text = text.strip()
        phase = 0
        for prefix, value in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if text.startswith(prefix):
                phase, text = value, text[len(prefix):]
                break
        try:
            bits = [_BITS[c] for c in text.upper()]
        except KeyError as exc:
            raise ValueError(f"bad Pauli literal {text!r}") from exc
        return cls(tuple(b[0] for b in bits), tuple(b[1] for b in bits), phase)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls((0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        x = [0] * n
        z = [0] * n
        x[qubit], z[qubit] = _BITS[letter.upper()]
        return cls(tuple(x), tuple(z))

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + "".join(_CHAR[b] for b in zip(self.x, self.z))

    def __repr__(self) -> str:
        return f"PauliString({str(self)!r})"

    def __neg__(self) -> PauliString:
        return PauliString(self.x, self.z, self.phase + 2)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)

    @property
    def letters(self) -> str:
        return "".join(_CHAR[b] for b in zip(self.x, self.z))

    @property
    def symplectic(self) -> np.ndarray:
        return np.array(self.x + self.z, dtype=np.uint8)

    @property
    def is_hermitian(self) -> bool:
        return self.phase % 2 == 0

    @property
    def weight(self) -> int:
        return sum(1 for a, b in zip(self.x, self.z) if a or b)

    def unsigned(self) -> PauliString:
        return PauliString(self.x, self.z, 0)

    def to_matrix(self) -> np.ndarray:
        """Dense matrix, qubit 0 as the most significant tensor factor."""
        single = {
            "I": np.eye(2, dtype=complex),
            "X": np.array([[0, 1], [1, 0]], dtype=complex),
            "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
            "Z": np.array([[1, 0], [0, -1]], dtype=complex),
        }
        out = np.array([[1j ** self.phase]], dtype=complex)
        for letter in self.letters:
            out = np.kron(out, single[letter])
        return out


def _check_width(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"width mismatch: {p.n} vs {q.n}")


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_width(p, q)
    return sum(a * d + b * c for a, b, c, d in zip(p.x, p.z, q.x, q.z)) % 2 == 0


def multiply(p: PauliString, q: PauliString) -> PauliString:
    _check_width(p, q)
    phase = p.phase + q.phase + sum(_g(a, b, c, d) for a, b, c, d in zip(p.x, p.z, q.x, q.z))
    x = tuple(a ^ c for a, c in zip(p.x, q.x))
    z = tuple(b ^ d for b, d in zip(p.z, q.z))
    return PauliString(x, z, phase % 4)


def product(paulis: Iterable[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for p in paulis:
        out = multiply(out, p)
    return out


# ---------------------------------------------------------------------------
# Clifford conjugation g P g^dagger

def _h(x, z, q):
    flip = x[q] & z[q]
    x[q], z[q] = z[q], x[q]
    return flip


def _s(x, z, q):
    flip = x[q] & z[q]
    z[q] ^= x[q]
    return flip


def _cnot(x, z, c, t):
    flip = x[c] & z[t] & (x[t] ^ z[c] ^ 1)
    x[t] ^= x[c]
    z[c] ^= z[t]
    return flip


def conjugate(gate: Gate, p: PauliString) -> PauliString:
    """Return ``U p U^dagger`` for the gate's unitary ``U``."""
    x, z = list(p.x), list(p.z)
    if any(q >= p.n for q in gate.qubits):
        raise ValueError(f"gate {gate} does not fit a {p.n}-qubit Pauli")
    kind, qs = gate.kind, gate.qubits
    flips = 0
    if kind is GateKind.H:
        flips = _h(x, z, qs[0])
    elif kind is GateKind.S:
        flips = _s(x, z, qs[0])
    elif kind is GateKind.SDG:
        flips = _s(x, z, qs[0])
        flips ^= _s(x, z, qs[0])
        flips ^= _s(x, z, qs[0])
    elif kind is GateKind.X:
        flips = z[qs[0]]
    elif kind is GateKind.Z:
        flips = x[qs[0]]
    elif kind is GateKind.Y:
        flips = x[qs[0]] ^ z[qs[0]]
    elif kind is GateKind.CNOT:
        flips = _cnot(x, z, *qs)
    elif kind is GateKind.CZ:
        c, t = qs
        flips = _h(x, z, t)
        flips ^= _cnot(x, z, c, t)
        flips ^= _h(x, z, t)
    elif kind is GateKind.CY:
        # CY = S_t CNOT Sdg_t; conjugation applies Sdg first.
        c, t = qs
        for _ in range(3):
            flips ^= _s(x, z, t)
        flips ^= _cnot(x, z, c, t)
        flips ^= _s(x, z, t)
    elif kind is GateKind.SWAP:
        a, b = qs
        x[a], x[b] = x[b], x[a]
        z[a], z[b] = z[b], z[a]
    else:  # pragma: no cover - enum is closed
        raise ValueError(f"unsupported gate kind {kind}")
    return PauliString(tuple(x), tuple(z), p.phase + 2 * flips)


def propagate(circuit: Circuit, paulis: Sequence[PauliString]) -> list[PauliString]:
    """Conjugate each Pauli through the whole circuit in time order."""
    require_valid(circuit)
    out = []
    for p in paulis:
        if p.n != circuit.width:
            raise ValueError(f"Pauli width {p.n} does not match circuit width {circuit.width}")
        for gate in circuit.gates:
            p = conjugate(gate, p)
        out.append(p)
    return out


def _local_tableau(gates: Sequence[Gate], qubits: Sequence[int]) -> list[str]:
    index = {q: i for i, q in enumerate(qubits)}
    m = len(qubits)
    out = []
    for i in range(m):
        for letter in "XZ":
            p = PauliString.single(m, i, letter)
            for g in gates:
                p = conjugate(g.remap(index), p)
            out.append(str(p))
    return out


def same_clifford(a: Sequence[Gate], b: Sequence[Gate], qubits: Sequence[int] | None = None) -> bool:
    """True iff the two gate lists are the same unitary up to global phase."""
    if qubits is None:
        qubits = sorted({q for g in list(a) + list(b) for q in g.qubits})
    return _local_tableau(a, qubits) == _local_tableau(b, qubits)


def gates_commute(g1: Gate, g2: Gate) -> bool:
    """Exact commutation test (up to global phase) via conjugation tables."""
    if not set(g1.qubits) & set(g2.qubits):
        return True
    return _commute_cached(g1, g2)


@lru_cache(maxsize=65536)
def _commute_cached(g1: Gate, g2: Gate) -> bool:
    return same_clifford([g1, g2], [g2, g1])
