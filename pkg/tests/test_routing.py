import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qencopt.circuit import CNOT, CZ, SWAP, Circuit, H, QubitInit
from qencopt.encoder import synthesize
from qencopt.rewrite import optimize
from qencopt.routing import (
    GridLayout, LayoutError, _swaps_only, decompose_swaps, embed, is_nnc, route, routing_equivalent, search_layout,
    unroute,
)
from qencopt.stabilizer import five_qubit_code
from qencopt.statevector import equal_up_to_global_phase, unitary

from conftest import TWO_WITH_SWAP, random_circuit


@pytest.fixture(scope="module")
def encoders():
    initial = synthesize(five_qubit_code()).circuit
    return initial, optimize(initial)[0]


def test_is_nnc_examples():
    c = Circuit(2, (CNOT(0, 1),))
    assert is_nnc(c, GridLayout(2, 2, ((0, 0), (0, 1))))
    report = is_nnc(c, GridLayout(2, 2, ((0, 0), (1, 1))))
    assert not report and report.gate_index == 0 and "distance 2" in report.message
    with pytest.raises(LayoutError):
        is_nnc(c, GridLayout(2, 2, ((0, 0),)))


def test_layout_validation_and_text():
    with pytest.raises(LayoutError, match="injective"):
        GridLayout(2, 2, ((0, 0), (0, 0)))
    with pytest.raises(LayoutError, match="outside"):
        GridLayout(2, 2, ((0, 2),))
    lay = GridLayout(2, 3, ((1, 2), (0, 0)))
    assert GridLayout.from_text(lay.to_text(), 2, 3) == lay
    with pytest.raises(LayoutError, match="line 1"):
        GridLayout.from_text("put 0 0 0\n", 2, 3)


def test_already_nnc_circuit_untouched():
    c = Circuit(3, (H(0), CNOT(0, 1), CZ(1, 2)))
    lay = GridLayout.row_major(1, 3, 3)
    routed = route(c, lay)
    assert routed.swap_count == 0
    assert routed.circuit == c


def test_route_inserts_swaps_row_first():
    c = Circuit(4, (CNOT(0, 3),))
    lay = GridLayout.row_major(2, 2)
    # (0,0) -> (1,1): distance 2, one swap moving qubit 0 down to (1,0).
    routed = route(c, lay)
    assert routed.swap_count == 1
    assert routed.circuit.gates == (SWAP(0, 2), CNOT(2, 3))
    assert routed.final_permutation == {0: 2, 1: 1, 2: 0, 3: 3}


def test_decompose_swaps_exact():
    c = Circuit(2, (SWAP(0, 1),))
    flat = decompose_swaps(c)
    assert flat.gates == (CNOT(0, 1), CNOT(1, 0), CNOT(0, 1))
    assert np.allclose(unitary(flat), unitary(c))


@settings(max_examples=100)
@given(st.integers(2, 6), st.integers(0, 2**32 - 1))
def test_routing_sound(n, seed):
    rng = np.random.default_rng(seed)
    c = random_circuit(rng, n, int(rng.integers(0, 14)), two=TWO_WITH_SWAP)
    rows, cols = [(1, 2), (2, 2), (2, 2), (2, 3), (2, 3), (2, 3), (3, 3)][n]
    cells = [(r, q) for r in range(rows) for q in range(cols)]
    pick = rng.permutation(len(cells))[:n]
    lay = GridLayout(rows, cols, tuple(cells[i] for i in pick))
    routed = route(c, lay)
    assert is_nnc(routed.circuit, routed.grid())
    assert is_nnc(routed.decomposed(), routed.grid())
    assert unroute(routed) == c
    assert routing_equivalent(c, routed)
    assert equal_up_to_global_phase(unitary(decompose_swaps(routed.with_restore())), unitary(embed(c, lay)))


def test_search_small():
    layout, routed = search_layout(Circuit(2, (CNOT(0, 1),)), 1, 2)
    assert routed.swap_count == 0


def test_search_limits():
    with pytest.raises(LayoutError, match="limited"):
        search_layout(Circuit(9), 3, 3)
    with pytest.raises(LayoutError, match="fit"):
        search_layout(Circuit(5), 2, 2)


def test_search_is_exhaustive_minimum(encoders, rng):
    initial, optimized = encoders
    for circ in encoders:
        res = search_layout(circ, 2, 3)
        cells = [(r, c) for r in range(2) for c in range(3)]
        for _ in range(60):
            pick = rng.permutation(6)[:5]
            lay = GridLayout(2, 3, tuple(cells[i] for i in pick))
            assert res.swap_count <= route(circ, lay).swap_count
            assert _swaps_only(circ, lay.placement) == route(circ, lay).swap_count


def test_encoder_swap_counts(encoders):
    initial, optimized = encoders
    a = search_layout(initial, 2, 3)
    b = search_layout(optimized, 2, 3)
    assert (a.swap_count, b.swap_count) == (3, 1)
    assert b.swap_count <= a.swap_count
    assert a.routed.decomposed().census()["cnot"] == 13
    assert b.routed.decomposed().census()["cnot"] == 11
    assert a.evaluated == 720


def test_inits_follow_placement():
    c = Circuit(2, (CNOT(0, 1),), (QubitInit.ONE, QubitInit.DATA))
    routed = route(c, GridLayout(2, 2, ((1, 1), (0, 1))))
    assert routed.circuit.inits == (QubitInit.ZERO, QubitInit.DATA, QubitInit.ZERO, QubitInit.ONE)
