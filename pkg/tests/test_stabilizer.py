import numpy as np
import pytest

from qencopt.circuit import CNOT, Circuit, H, QubitInit, X, Z
from qencopt.pauli import PauliString
from qencopt.stabilizer import (
    CodeError, StabilizerCode, decompose, emit_code, five_qubit_code, parse_code, same_group, trivial_code,
    verify_encoder,
)

P = PauliString.from_str


def test_five_qubit_code_is_consistent():
    code = five_qubit_code()
    assert code.problems() == []
    assert (code.n, code.k) == (5, 1)
    assert code.check_matrix().shape == (4, 10)


def test_problems_detected():
    bad = StabilizerCode.from_strings(["XI", "ZI"], ["IX"], ["IZ"])
    msgs = bad.problems()
    assert any("anticommute" in m for m in msgs)
    dep = StabilizerCode.from_strings(["ZZI", "IZZ", "ZIZ"], [], [])
    assert any("not independent" in m for m in dep.problems())


def test_decompose_exact_phase():
    gens = [P("XZZXI"), P("IXZZX")]
    prod = gens[0] * gens[1]
    assert decompose(prod, gens).ok
    assert decompose(-prod, gens).in_group and not decompose(-prod, gens).phase_ok
    assert not decompose(P("ZZZZZ"), gens).in_group


def test_same_group_signs():
    a = [P("ZZI"), P("IZZ")]
    assert same_group(a, [P("ZIZ"), P("IZZ")])
    assert not same_group(a, [P("-ZIZ"), P("IZZ")])


def test_code_file_round_trip():
    code = five_qubit_code()
    again = parse_code(emit_code(code))
    assert again.stabilizers == code.stabilizers and again.logical_x == code.logical_x


@pytest.mark.parametrize("text, fragment", [
    ("k 1\nstab XX\n", "must precede"),
    ("n 2\nk 1\nstab XXX\n", "expected 2"),
    ("n 2\nk 1\nfoo XX\n", "unknown directive"),
    ("n 2\nk 1\nstab XQ\n", "bad Pauli"),
    ("n 2\nk 0\nstab XX\nstab ZI\n", "anticommute"),
])
def test_parse_code_errors(text, fragment):
    with pytest.raises(CodeError, match=fragment):
        parse_code(text)


def test_trivial_encoder_passes():
    code = trivial_code(3, 1)
    c = Circuit(3, (), (QubitInit.ZERO, QubitInit.ZERO, QubitInit.DATA))
    assert verify_encoder(c, code).passed


def test_one_init_sign():
    code = StabilizerCode.from_strings(["-ZI"], ["IX"], ["IZ"])
    c = Circuit(2, (), (QubitInit.ONE, QubitInit.DATA))
    assert verify_encoder(c, code).passed
    assert not verify_encoder(c.with_inits((QubitInit.ZERO, QubitInit.DATA)), code).passed


def test_bell_pair_encoder():
    code = StabilizerCode.from_strings(["XX", "ZZ"])
    c = Circuit(2, (H(0), CNOT(0, 1)))
    assert verify_encoder(c, code).passed
    flipped = c.with_gates(c.gates + (Z(0),))
    report = verify_encoder(flipped, code)
    assert not report.passed
    assert any(f.reason == "wrong sign" for f in report.failures)


def test_logical_frame_and_strict_mode():
    code = trivial_code(2, 1)
    c = Circuit(2, (Z(1),), (QubitInit.ZERO, QubitInit.DATA))
    loose = verify_encoder(c, code)
    assert loose.passed and loose.logical_frame == {"X[1]": -1, "Z[1]": 1}
    assert not verify_encoder(c, code, strict_logical_phase=True).passed


def test_verify_rejects_width_mismatch():
    with pytest.raises(ValueError):
        verify_encoder(Circuit(2), five_qubit_code())


def test_report_dict():
    c = Circuit(2, (X(0),), (QubitInit.ZERO, QubitInit.DATA))
    d = verify_encoder(c, trivial_code(2, 1)).as_dict()
    assert d["verdict"] == "FAIL"
    assert d["checks"][0]["reason"] == "wrong sign"
