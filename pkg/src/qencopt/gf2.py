"""Small dense linear algebra over GF(2) on numpy uint8 arrays."""
from __future__ import annotations

import numpy as np


def as_bits(a) -> np.ndarray:
    return np.asarray(a, dtype=np.uint8) & 1


def rref(a) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the pivot columns, pivots chosen leftmost-first."""
    a = as_bits(a)
    return rref_limited(a, a.shape[1])


def rank(a) -> int:
    a = as_bits(a)
    if a.size == 0:
        return 0
    return len(rref(a)[1])


def solve_left(rows, target) -> np.ndarray | None:
    """Find a bit vector ``c`` with ``c @ rows == target`` (mod 2), or None.

    Returns the unique solution when ``rows`` are independent; otherwise
    one valid solution.
    """
    rows = as_bits(rows)
    target = as_bits(target)
    k = rows.shape[0]
    if k == 0:
        return np.zeros(0, dtype=np.uint8) if not target.any() else None
    # Row-reduce [rows | I] so that combinations are tracked.
    aug = np.concatenate([rows, np.eye(k, dtype=np.uint8)], axis=1)
    red, pivots = rref_limited(aug, rows.shape[1])
    residual = target.copy()
    combo = np.zeros(k, dtype=np.uint8)
    for i, c in enumerate(pivots):
        if residual[c]:
            residual ^= red[i, : rows.shape[1]]
            combo ^= red[i, rows.shape[1]:]
    if residual.any():
        return None
    return combo


def rref_limited(a, ncols: int) -> tuple[np.ndarray, list[int]]:
    """Row reduce, but only pivot within the first ``ncols`` columns."""
    m = as_bits(a).copy()
    rows = m.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == rows:
            break
        hits = np.nonzero(m[r:, c])[0]
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            m[[r, p]] = m[[p, r]]
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] ^= m[r]
        pivots.append(c)
        r += 1
    return m, pivots


def inverse(a) -> np.ndarray:
    a = as_bits(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix is not square")
    red, pivots = rref_limited(np.concatenate([a, np.eye(n, dtype=np.uint8)], axis=1), n)
    if len(pivots) != n:
        raise ValueError("matrix is singular over GF(2)")
    return red[:, n:]


def matmul(a, b) -> np.ndarray:
    return (as_bits(a).astype(np.int64) @ as_bits(b).astype(np.int64) % 2).astype(np.uint8)
