"""Pure-CNOT circuits as nonsingular matrices over GF(2).

Rows are qubits. CNOT(c, t) adds row ``c`` into row ``t``, starting from the
identity. Internally a matrix is a tuple of row bitmasks (bit ``j`` is column
``j``), which is what the exact search hashes.
"""
from __future__ import annotations

from collections import deque
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .circuit import CNOT, Circuit, Gate, GateKind

MAX_WIDTH = 16
MAX_EXACT_WIDTH = 5
_TABLE_WIDTH = 4  # full distance table up to this width

Rows = tuple[int, ...]


class LinearCircuitError(ValueError):
    pass


def _to_rows(m) -> Rows:
    m = np.asarray(m, dtype=np.uint8) & 1
    n = m.shape[0]
    if m.shape != (n, n):
        raise LinearCircuitError(f"matrix must be square, got shape {m.shape}")
    if n > MAX_WIDTH:
        raise LinearCircuitError(f"matrix width {n} exceeds limit {MAX_WIDTH}")
    return tuple(int(sum(int(b) << j for j, b in enumerate(row))) for row in m)


def _to_array(rows: Rows) -> np.ndarray:
    n = len(rows)
    return np.array([[(r >> j) & 1 for j in range(n)] for r in rows], dtype=np.uint8)


def _identity(n: int) -> Rows:
    return tuple(1 << i for i in range(n))


def _moves(n: int) -> list[tuple[int, int]]:
    return [(c, t) for c in range(n) for t in range(n) if c != t]


def _apply(rows: Rows, c: int, t: int) -> Rows:
    out = list(rows)
    out[t] ^= rows[c]
    return tuple(out)


def _mul(a: Rows, b: Rows) -> Rows:
    out = []
    for r in a:
        acc = 0
        j = 0
        while r:
            if r & 1:
                acc ^= b[j]
            r >>= 1
            j += 1
        out.append(acc)
    return tuple(out)


def _inverse(rows: Rows) -> Rows:
    n = len(rows)
    a = list(rows)
    inv = list(_identity(n))
    for col in range(n):
        piv = next((i for i in range(col, n) if (a[i] >> col) & 1), None)
        if piv is None:
            raise LinearCircuitError("matrix is singular over GF(2)")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        for i in range(n):
            if i != col and (a[i] >> col) & 1:
                a[i] ^= a[col]
                inv[i] ^= inv[col]
    return tuple(inv)


def is_nonsingular(m) -> bool:
    try:
        _inverse(_to_rows(m))
    except LinearCircuitError:
        return False
    return True


def circuit_to_matrix(circuit: Circuit) -> np.ndarray:
    """Replay each CNOT as the row transformation R_t <- R_t + R_c."""
    if circuit.width > MAX_WIDTH:
        raise LinearCircuitError(f"circuit width {circuit.width} exceeds limit {MAX_WIDTH}")
    rows = _identity(circuit.width)
    for idx, gate in enumerate(circuit.gates):
        if gate.kind is not GateKind.CNOT:
            raise LinearCircuitError(f"not a linear circuit: gate {idx} is {gate}")
        rows = _apply(rows, gate.control, gate.target)
    return _to_array(rows)


def matrices_equal(a, b) -> bool:
    a = np.asarray(a) & 1
    b = np.asarray(b) & 1
    return a.shape == b.shape and bool(np.array_equal(a, b))


def circuits_linearly_equivalent(c1: Circuit, c2: Circuit) -> bool:
    if c1.width != c2.width:
        raise LinearCircuitError(f"width mismatch: {c1.width} vs {c2.width}")
    return matrices_equal(circuit_to_matrix(c1), circuit_to_matrix(c2))


def gates_to_circuit(pairs: Iterable[tuple[int, int]], n: int) -> Circuit:
    return Circuit(n, tuple(CNOT(c, t) for c, t in pairs))


def gauss_synthesize(m) -> Circuit:
    """Eliminate ``m`` to the identity, then emit the steps in reverse."""
    rows = list(_to_rows(m))
    n = len(rows)
    steps: list[tuple[int, int]] = []

    def add(c: int, t: int):
        rows[t] ^= rows[c]
        steps.append((c, t))

    for col in range(n):
        if not (rows[col] >> col) & 1:
            src = next((i for i in range(col + 1, n) if (rows[i] >> col) & 1), None)
            if src is None:
                raise LinearCircuitError("matrix is singular over GF(2)")
            add(src, col)
        for i in range(col + 1, n):
            if (rows[i] >> col) & 1:
                add(col, i)
    for col in range(n - 1, -1, -1):
        for i in range(col):
            if (rows[i] >> col) & 1:
                add(col, i)
    return gates_to_circuit(reversed(steps), n)


# ---------------------------------------------------------------------------
# exact search

@lru_cache(maxsize=None)
def distance_table(n: int) -> dict[Rows, int]:
    """Minimal CNOT count for every element of GL(n, 2), by BFS from the identity."""
    if n > _TABLE_WIDTH:
        raise LinearCircuitError(f"full table only built up to width {_TABLE_WIDTH}")
    start = _identity(n)
    dist = {start: 0}
    queue = deque([start])
    moves = _moves(n)
    while queue:
        cur = queue.popleft()
        d = dist[cur] + 1
        for c, t in moves:
            nxt = _apply(cur, c, t)
            if nxt not in dist:
                dist[nxt] = d
                queue.append(nxt)
    return dist


def _bidirectional_distance(a: Rows, b: Rows) -> int:
    """Fewest CNOTs taking matrix ``a`` to ``b``; meet-in-the-middle BFS."""
    if a == b:
        return 0
    moves = _moves(len(a))
    seen = [{a: 0}, {b: 0}]
    frontier = [[a], [b]]
    while frontier[0] and frontier[1]:
        side = 0 if len(frontier[0]) <= len(frontier[1]) else 1
        mine, other = seen[side], seen[1 - side]
        nxt_frontier = []
        for cur in frontier[side]:
            d = mine[cur] + 1
            for c, t in moves:
                nxt = _apply(cur, c, t)
                if nxt in mine:
                    continue
                if nxt in other:
                    # Finish the layer so the minimum is exact.
                    best = d + other[nxt]
                    for cur2 in frontier[side]:
                        for c2, t2 in moves:
                            n2 = _apply(cur2, c2, t2)
                            if n2 in other:
                                best = min(best, mine[cur2] + 1 + other[n2])
                    return best
                mine[nxt] = d
                nxt_frontier.append(nxt)
        frontier[side] = nxt_frontier
    raise LinearCircuitError("matrix is singular over GF(2)")


def cnot_distance(m) -> int:
    rows = _to_rows(m)
    _inverse(rows)
    n = len(rows)
    if n <= _TABLE_WIDTH:
        return distance_table(n)[rows]
    if n > MAX_EXACT_WIDTH:
        raise LinearCircuitError("exact search unavailable, use gauss_synthesize")
    return _bidirectional_distance(_identity(n), rows)


def _dist_between(a: Rows, b: Rows) -> int:
    n = len(a)
    if n <= _TABLE_WIDTH:
        # A circuit w with w a = b has matrix b a^-1.
        return distance_table(n)[_mul(b, _inverse(a))]
    return _bidirectional_distance(a, b)


def optimal_synthesize(m) -> Circuit:
    """Minimal-CNOT circuit for ``m`` (width at most 5).

    Among minimal circuits the lexicographically smallest (control, target)
    sequence is returned.
    """
    rows = _to_rows(m)
    n = len(rows)
    if n > MAX_EXACT_WIDTH:
        raise LinearCircuitError("exact search unavailable, use gauss_synthesize")
    _inverse(rows)
    cur = _identity(n)
    left = _dist_between(cur, rows)
    pairs: list[tuple[int, int]] = []
    moves = _moves(n)
    while left:
        for c, t in moves:
            nxt = _apply(cur, c, t)
            if _dist_between(nxt, rows) == left - 1:
                pairs.append((c, t))
                cur, left = nxt, left - 1
                break
        else:  # pragma: no cover - distances are consistent by construction
            raise RuntimeError("search lost track of the shortest path")
    return gates_to_circuit(pairs, n)


def format_matrix(m) -> str:
    m = np.asarray(m, dtype=np.uint8)
    return "\n".join("".join(str(int(b)) for b in row) for row in m) + "\n"


def parse_matrix(text: str) -> np.ndarray:
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].replace(" ", "").strip()
        if not line:
            continue
        if set(line) - {"0", "1"}:
            raise LinearCircuitError(f"line {lineno}: matrix rows contain only 0 and 1")
        rows.append([int(ch) for ch in line])
    if not rows or any(len(r) != len(rows) for r in rows):
        raise LinearCircuitError("matrix must be square")
    return np.array(rows, dtype=np.uint8)


def window_matrix(gates: Sequence[Gate], qubits: Sequence[int]) -> np.ndarray:
    """F2 matrix of CNOT gates restricted to ``qubits`` (relabelled in order)."""
    index = {q: i for i, q in enumerate(qubits)}
    local = Circuit(len(qubits), tuple(g.remap(index) for g in gates))
    return circuit_to_matrix(local)
