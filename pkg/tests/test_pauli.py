import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qencopt.circuit import CNOT, CY, CZ, SWAP, Circuit, H, S, Sdg, X, Y, Z
from qencopt.pauli import PauliString, commutes, conjugate, gates_commute, multiply, propagate, same_clifford
from qencopt.statevector import unitary

from conftest import TWO_WITH_SWAP, circuits, random_circuit

paulis = st.integers(1, 4).flatmap(
    lambda n: st.tuples(
        st.text("IXYZ", min_size=n, max_size=n),
        st.sampled_from(["+", "-", "+i", "-i"]),
    ).map(lambda t: PauliString.from_str(t[1] + t[0]))
)


def test_from_str_and_str():
    p = PauliString.from_str("-iXYZI")
    assert str(p) == "-iXYZI"
    assert p.weight == 3
    assert not p.is_hermitian


@given(st.data())
def test_multiply_matches_matrices(data):
    p = data.draw(paulis)
    q = data.draw(st.builds(
        lambda s, ph: PauliString.from_str(ph + s),
        st.text("IXYZ", min_size=p.n, max_size=p.n), st.sampled_from(["+", "-"]),
    ))
    assert np.allclose(multiply(p, q).to_matrix(), p.to_matrix() @ q.to_matrix())
    ab = p.to_matrix() @ q.to_matrix()
    ba = q.to_matrix() @ p.to_matrix()
    assert commutes(p, q) == np.allclose(ab, ba)


@pytest.mark.parametrize("gate", [H(0), S(0), Sdg(0), X(0), Y(0), Z(0), CNOT(0, 1), CNOT(1, 0), CZ(0, 1), CY(0, 1),
                                  CY(1, 0), SWAP(0, 1)])
def test_conjugation_table_against_dense(gate):
    u = unitary(Circuit(2, (gate,)))
    for text in ["XI", "ZI", "IX", "IZ", "YI", "IY", "XZ", "YY"]:
        p = PauliString.from_str(text)
        assert np.allclose(conjugate(gate, p).to_matrix(), u @ p.to_matrix() @ u.conj().T)


@given(circuits(max_width=4, max_gates=15, two=TWO_WITH_SWAP), st.integers(0, 2**32 - 1))
def test_propagate_matches_dense(c, seed):
    rng = np.random.default_rng(seed)
    letters = "".join(rng.choice(list("IXYZ"), c.width))
    p = PauliString.from_str(letters)
    (img,) = propagate(c, [p])
    u = unitary(c)
    assert np.allclose(img.to_matrix(), u @ p.to_matrix() @ u.conj().T)


def test_gates_commute():
    assert gates_commute(CNOT(0, 1), CNOT(0, 2))
    assert gates_commute(CNOT(0, 2), CNOT(1, 2))
    assert not gates_commute(CNOT(0, 1), CNOT(1, 2))
    assert gates_commute(Z(0), CNOT(0, 1))
    assert gates_commute(X(1), CNOT(0, 1))
    assert not gates_commute(H(0), CNOT(0, 1))
    assert gates_commute(H(3), CNOT(0, 1))


def test_same_clifford():
    assert same_clifford([CZ(0, 1)], [H(1), CNOT(0, 1), H(1)])
    assert not same_clifford([CNOT(0, 1)], [CNOT(1, 0)])


def test_width_mismatch():
    with pytest.raises(ValueError):
        multiply(PauliString.from_str("X"), PauliString.from_str("XX"))
    with pytest.raises(ValueError):
        propagate(Circuit(2, (H(0),)), [PauliString.from_str("X")])
