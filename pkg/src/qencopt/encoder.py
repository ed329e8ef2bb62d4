"""Encoder synthesis from the standard form of a stabilizer check matrix.

The check matrix is brought to the block layout

    X-part            Z-part
    [ I  A1  A2 ]   [ B  0  C ]     r rows, one per X-type generator
    [ 0  0   0  ]   [ D  I  E ]     s rows, pure Z-type generators

by row operations and qubit swaps. Positions ``0..r-1`` become seed qubits
(prepared with H and used as controls), ``r..r+s-1`` stay in |0>, and the
last ``k`` positions carry the data.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .circuit import CNOT, CY, CZ, Circuit, Gate, GateKind, H, QubitInit, S, Sdg, SWAP, X, Z
from .pauli import PauliString, conjugate, multiply, propagate
from .stabilizer import CodeError, StabilizerCode, decompose, same_group


class DependentGeneratorsError(CodeError):
    pass


@dataclass(frozen=True)
class StandardForm:
    """Result of reducing a check matrix.

    ``rows`` are Pauli operators on the original qubit labels; ``perm[p]`` is
    the original qubit sitting at standard-form position ``p``. ``row_ops``
    replays the reduction: ``("swap", i, j)`` exchanges rows, ``("add", t, s)``
    sets row ``t`` to ``row[t] * row[s]``.
    """

    n: int
    k: int
    r: int
    rows: tuple[PauliString, ...]
    perm: tuple[int, ...]
    row_ops: tuple[tuple[str, int, int], ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]

    @property
    def s(self) -> int:
        return self.n - self.k - self.r

    @property
    def data_qubits(self) -> list[int]:
        return list(self.perm[self.n - self.k:])

    def permuted(self) -> list[PauliString]:
        """Rows with columns reordered into standard-form positions."""
        out = []
        for p in self.rows:
            out.append(PauliString(tuple(p.x[q] for q in self.perm), tuple(p.z[q] for q in self.perm), p.phase))
        return out

    def matrix(self) -> np.ndarray:
        return np.array([p.symplectic for p in self.permuted()], dtype=np.uint8)


def replay_row_ops(generators: Sequence[PauliString], row_ops) -> list[PauliString]:
    rows = list(generators)
    for op, a, b in row_ops:
        if op == "swap":
            rows[a], rows[b] = rows[b], rows[a]
        else:
            rows[a] = multiply(rows[a], rows[b])
    return rows


def to_standard_form(generators: Sequence[PauliString]) -> StandardForm:
    gens = list(generators)
    if not gens:
        raise CodeError("no generators given")
    n = gens[0].n
    m = len(gens)
    rows = list(gens)
    origin = list(range(m))  # original generator index at each row slot
    ops: list[tuple[str, int, int]] = []

    def swap_rows(i: int, j: int):
        if i != j:
            rows[i], rows[j] = rows[j], rows[i]
            origin[i], origin[j] = origin[j], origin[i]
            ops.append(("swap", i, j))

    def add_row(t: int, src: int):
        rows[t] = multiply(rows[t], rows[src])
        ops.append(("add", t, src))

    # X part: leftmost pivot column first, lowest row index wins.
    x_pivots: list[int] = []
    for col in range(n):
        r = len(x_pivots)
        if r == m:
            break
        hit = next((i for i in range(r, m) if rows[i].x[col]), None)
        if hit is None:
            continue
        swap_rows(r, hit)
        for i in range(m):
            if i != r and rows[i].x[col]:
                add_row(i, r)
        x_pivots.append(col)
    r = len(x_pivots)

    # Z part of the remaining rows, restricted to non-pivot columns.
    rest = [c for c in range(n) if c not in x_pivots]
    z_pivots: list[int] = []
    for col in rest:
        t = r + len(z_pivots)
        if t == m:
            break
        hit = next((i for i in range(t, m) if rows[i].z[col]), None)
        if hit is None:
            continue
        swap_rows(t, hit)
        for i in range(m):
            if i != t and rows[i].z[col]:
                add_row(i, t)
        z_pivots.append(col)

    if r + len(z_pivots) < m:
        bad = origin[r + len(z_pivots)]
        raise DependentGeneratorsError(f"dependent generators: generator {bad} is a product of the others")
    rest = [c for c in rest if c not in z_pivots]
    perm = tuple(x_pivots + z_pivots + rest)
    std = StandardForm(n, n - m, r, tuple(rows), perm, tuple(ops), (), ())
    lx, lz = canonical_logicals(std)
    return StandardForm(n, n - m, r, tuple(rows), perm, tuple(ops), tuple(lx), tuple(lz))


def canonical_logicals(std: StandardForm) -> tuple[list[PauliString], list[PauliString]]:
    """Logical operators read off the standard-form blocks (original labels)."""
    n, k, r, s = std.n, std.k, std.r, std.s
    rows = std.permuted()
    lx, lz = [], []
    for j in range(k):
        d = r + s + j
        x = [0] * n
        z = [0] * n
        x[d] = 1
        for m_ in range(r, r + s):  # E^T column
            x[m_] = rows[m_].z[d]
        for i in range(r):  # C column
            z[i] = rows[i].z[d]
        lx.append(_unpermute(PauliString(tuple(x), tuple(z)), std.perm))
        zz = [0] * n
        zz[d] = 1
        for i in range(r):  # A2 column
            zz[i] = rows[i].x[d]
        lz.append(_unpermute(PauliString((0,) * n, tuple(zz)), std.perm))
    return lx, lz


def _unpermute(p: PauliString, perm: Sequence[int]) -> PauliString:
    x = [0] * p.n
    z = [0] * p.n
    for pos, q in enumerate(perm):
        x[q], z[q] = p.x[pos], p.z[pos]
    return PauliString(tuple(x), tuple(z), p.phase)


# ---------------------------------------------------------------------------
# Clifford synthesis for the data-qubit frame

_INVERSE = {GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S}


def invert(gates: Sequence[Gate]) -> list[Gate]:
    return [Gate(_INVERSE.get(g.kind, g.kind), g.qubits) for g in reversed(gates)]


def synthesize_clifford(x_images: Sequence[PauliString], z_images: Sequence[PauliString]) -> list[Gate]:
    """Gates ``C`` with ``C X_j C^dag = x_images[j]`` and likewise for Z, exactly.

    Greedy column-by-column reduction of the tableau to the identity; the
    returned list is the inverse of the reduction.
    """
    k = len(x_images)
    xs, zs = list(x_images), list(z_images)
    ops: list[Gate] = []

    def apply(g: Gate):
        ops.append(g)
        for lst in (xs, zs):
            for i, p in enumerate(lst):
                lst[i] = conjugate(g, p)

    for j in range(k):
        p = xs[j]
        for q in range(j, k):
            if p.z[q] and not p.x[q]:
                apply(H(q))
            elif p.z[q] and p.x[q]:
                apply(Sdg(q))
            p = xs[j]
        support = [q for q in range(j, k) if p.x[q]]
        if not support:
            raise ValueError("images do not form a valid tableau")
        if support[0] != j:
            apply(SWAP(j, support[0]))
            support = [j if q == support[0] else q for q in support]
        for q in support:
            if q != j:
                apply(CNOT(j, q))
        qz = zs[j]
        for q in range(j + 1, k):
            if qz.x[q] and not qz.z[q]:
                apply(H(q))
            elif qz.x[q] and qz.z[q]:
                apply(S(q))
                apply(H(q))
            qz = zs[j]
        for q in range(j + 1, k):
            if qz.z[q]:
                apply(CNOT(q, j))
        qz = zs[j]
        if qz.x[j]:
            for g in (H(j), S(j), H(j)):
                apply(g)
        if xs[j].phase == 2:
            apply(Z(j))
        if zs[j].phase == 2:
            apply(X(j))
    for j in range(k):
        if str(xs[j]) != str(PauliString.single(k, j, "X")) or str(zs[j]) != str(PauliString.single(k, j, "Z")):
            raise ValueError("images do not form a valid tableau")
    return invert(ops)


# ---------------------------------------------------------------------------
# encoder

@dataclass(frozen=True)
class EncoderResult:
    circuit: Circuit
    standard_form: StandardForm
    data_qubits: tuple[int, ...]

    def report(self) -> dict:
        std = self.standard_form
        return {
            "permutation": list(std.perm),
            "data_qubits": list(self.data_qubits),
            "r": std.r,
            "s": std.s,
            "standard_form_rows": [str(p) for p in std.permuted()],
            "logical_x_representatives": [str(p) for p in std.logical_x],
            "logical_z_representatives": [str(p) for p in std.logical_z],
            "census": self.circuit.census().as_dict(),
        }


# Phase (as a power of i) to put on the |1> branch of a seed qubit.
_PHASE_GATE = {0: [], 1: [S], 2: [Z], 3: [Sdg]}


def _controlled(letter: str, c: int, t: int, expand_cy: bool) -> tuple[list[Gate], int]:
    """Gates applying Pauli ``letter`` on ``t`` controlled by ``c``.

    Also returns the power of i by which the implemented operator falls
    short of the Hermitian Pauli.
    """
    if letter == "X":
        return [CNOT(c, t)], 0
    if letter == "Z":
        return [CZ(c, t)], 0
    if expand_cy:
        # CZ then CNOT implements XZ = -iY.
        return [CZ(c, t), CNOT(c, t)], 1
    return [CY(c, t)], 0


def synthesize(code: StabilizerCode, expand_cy: bool = True, exact_logical_frame: bool = False) -> EncoderResult:
    """Build the standard-form encoder for ``code``.

    With ``exact_logical_frame`` the data-qubit prefix also fixes logical
    signs, so data X/Z land on exactly +L times a stabilizer. Without it the
    prefix only fixes the non-Pauli part of the frame.
    """
    code.check()
    n, k = code.n, code.k
    if n == k:
        circ = Circuit(n, (), (QubitInit.DATA,) * n)
        std = StandardForm(n, k, 0, (), tuple(range(n)), (), (), ())
        return _fix_frame(circ, code, std, exact_logical_frame)
    std = to_standard_form(code.stabilizers)
    perm = std.perm
    r, s = std.r, std.s
    rows = std.permuted()

    inits = [QubitInit.ZERO] * n
    for q in std.data_qubits:
        inits[q] = QubitInit.DATA
    gates: list[Gate] = []

    # Canonical logical X: data qubit fans out onto the middle block.
    for j in range(k):
        d = r + s + j
        for m_ in range(r, r + s):
            if rows[m_].z[d]:
                gates.append(CNOT(perm[d], perm[m_]))

    for i in range(r):
        row = rows[i]
        letters = row.letters
        block_gates: list[Gate] = []
        short = 0
        for j in range(n):
            if j == i:
                continue
            letter = letters[j]
            if letter == "I":
                continue
            if j < r:
                if j > i:
                    continue  # seed qubit j is still |0>
                block, extra = _controlled("Z", perm[i], perm[j], expand_cy)
            else:
                block, extra = _controlled(letter, perm[i], perm[j], expand_cy)
            block_gates += block
            short += extra
        needed = (row.phase + (letters[i] == "Y") + short) % 4
        # The phase fix is diagonal on a control wire, so it commutes with
        # the whole block; it sits right after H to keep lowering cheap.
        gates.append(H(perm[i]))
        gates += [g(perm[i]) for g in _PHASE_GATE[needed]]
        gates += block_gates

    circ = Circuit(n, tuple(gates), tuple(inits))
    # Pure-Z generators with the wrong sign: flip the corresponding |0>.
    fixes = []
    for pos in range(r, r + s):
        q = perm[pos]
        (img,) = propagate(circ, [PauliString.single(n, q, "Z")])
        if not decompose(img, code.stabilizers).ok:
            fixes.append(X(q))
    circ = circ.with_gates(fixes + list(circ.gates))
    return _fix_frame(circ, code, std, exact_logical_frame)


def _fix_frame(circ: Circuit, code: StabilizerCode, std: StandardForm, exact: bool) -> EncoderResult:
    """Prepend a data-qubit Clifford so that data X/Z land on the code's own logicals."""
    n, k = code.n, code.k
    data = circ.data_qubits
    if k == 0:
        return EncoderResult(circ, std, ())
    ix = propagate(circ, [PauliString.single(n, q, "X") for q in data])
    iz = propagate(circ, [PauliString.single(n, q, "Z") for q in data])
    basis = list(code.stabilizers) + ix + iz
    ns = len(code.stabilizers)

    def data_image(target: PauliString) -> PauliString:
        m = decompose(target, basis)
        if not m.in_group:
            raise CodeError(f"logical operator {target} is not generated by the encoded frame")
        # target = c * rep, rep = stab * prod(ix^a) * prod(iz^b)
        c = (target.phase - m.representative.phase) % 4
        out = PauliString.identity(k)
        for w in m.witness:
            if w < ns:
                continue
            letter = "X" if w < ns + k else "Z"
            out = multiply(out, PauliString.single(k, (w - ns) % k, letter))
        return PauliString(out.x, out.z, (out.phase + c) if exact else 0)

    dx = [data_image(p) for p in code.logical_x]
    dz = [data_image(p) for p in code.logical_z]
    local = synthesize_clifford(dx, dz)
    prefix = [g.remap(data) for g in local]
    return EncoderResult(circ.with_gates(prefix + list(circ.gates)), std, tuple(data))


def synthesize_encoder(code: StabilizerCode, expand_cy: bool = True, exact_logical_frame: bool = False) -> Circuit:
    return synthesize(code, expand_cy, exact_logical_frame).circuit


def replay_matches(std: StandardForm, generators: Sequence[PauliString]) -> bool:
    """Replaying the row log reproduces the rows, and they generate the original group."""
    replayed = replay_row_ops(generators, std.row_ops)
    exact = all(str(a) == str(b) for a, b in zip(replayed, std.rows))
    return exact and same_group(list(std.rows), list(generators))
