import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from qencopt import gf2


@given(st.integers(1, 6), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_solve_left(k, n, seed):
    rng = np.random.default_rng(seed)
    rows = rng.integers(0, 2, (k, n), dtype=np.uint8)
    combo = rng.integers(0, 2, k, dtype=np.uint8)
    target = (combo @ rows) % 2
    sol = gf2.solve_left(rows, target)
    assert sol is not None
    assert np.array_equal((sol @ rows) % 2, target)


def test_rank_and_unsolvable():
    rows = np.array([[1, 1, 0], [0, 1, 1], [1, 0, 1]])
    assert gf2.rank(rows) == 2
    assert gf2.solve_left(rows, np.array([1, 0, 0])) is None


def test_inverse():
    m = np.array([[1, 0, 0], [1, 1, 0], [1, 0, 1]], dtype=np.uint8)
    inv = gf2.inverse(m)
    assert np.array_equal(gf2.matmul(m, inv), np.eye(3, dtype=np.uint8))
