import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qencopt.circuit import CNOT, CY, CZ, Circuit, GateKind, H, QubitInit, S, X, Z, emit_circuit
from qencopt.encoder import synthesize
from qencopt.rewrite import (
    DEFAULT_PASSES, NoMatch, OptimizeConfig, RewriteTrace, absorb_initial_x, apply_rule, get_rule, instance_sound,
    optimize, replay_trace, rule_catalog, to_cnot_only,
)
from qencopt.stabilizer import five_qubit_code, verify_encoder
from qencopt.statevector import equal_up_to_global_phase, unitary

from conftest import circuits, random_code

D = QubitInit.DATA


def data(n, *gates):
    return Circuit(n, tuple(gates), (D,) * n)


@pytest.fixture(scope="module")
def initial():
    return synthesize(five_qubit_code()).circuit


@pytest.fixture(scope="module")
def optimized(initial):
    return optimize(initial)


def test_catalog_contents():
    ids = [r.id for r in rule_catalog()]
    for rid in [str(i) for i in range(1, 11)] + ["HH-cancel", "CNOT-pair-cancel", "CY-expand"]:
        assert rid in ids


@pytest.mark.parametrize("rule", rule_catalog(), ids=lambda r: r.id)
def test_rule_instances_sound(rule):
    assert rule.instances
    for inst in rule.instances:
        assert instance_sound(rule, inst)


def test_rule3_instance():
    out, entry = apply_rule(data(2, CZ(0, 1)), "3", [0])
    assert out.gates == (H(1), CNOT(0, 1), H(1))
    assert entry.census_after["cnot"] == 1
    back, _ = apply_rule(out, "3", [0, 1, 2])
    assert back.gates == (CZ(0, 1),)


def test_rule10_both_directions():
    out, _ = apply_rule(data(3, CNOT(0, 1), CNOT(0, 2)), "10", [0, 1])
    assert out.gates == (CNOT(1, 2), CNOT(0, 1), CNOT(1, 2))
    back, _ = apply_rule(out, "10", [0, 1, 2])
    assert back.gates == (CNOT(0, 1), CNOT(0, 2))


def test_rule4_needs_leading_zero_control():
    c = Circuit(2, (CNOT(0, 1),), (QubitInit.ZERO, D))
    out, _ = apply_rule(c, "4", [0])
    assert out.gates == ()
    with pytest.raises(NoMatch):
        apply_rule(Circuit(2, (X(0), CNOT(0, 1)), (QubitInit.ZERO, D)), "4", [1])
    with pytest.raises(NoMatch):
        apply_rule(data(2, CNOT(0, 1)), "4", [0])


def test_rule5_plus_target():
    c = Circuit(2, (CNOT(0, 1),), (D, QubitInit.PLUS))
    assert apply_rule(c, "5", [0])[0].gates == ()


def test_rule8_requires_via():
    with pytest.raises(NoMatch):
        apply_rule(data(3, CNOT(0, 2)), "8", [0])
    out, entry = apply_rule(data(3, CNOT(0, 2)), "8", [0], {"via": 1})
    assert len(out.gates) == 4 and entry.params == {"via": 1}


def test_hh_cancel():
    out, _ = apply_rule(data(1, H(0), H(0)), "HH-cancel", [0, 1])
    assert out.gates == ()


def test_interposed_gate_blocks_window():
    c = data(2, H(0), CNOT(0, 1), H(0))
    with pytest.raises(NoMatch, match="interposes"):
        apply_rule(c, "HH-cancel", [0, 2])
    # A gate on an unrelated qubit does not block.
    c = data(2, H(0), H(1), H(0))
    assert apply_rule(c, "HH-cancel", [0, 2])[0].gates == (H(1),)


def test_rule6_on_three_cnot_window():
    c = data(3, CNOT(0, 1), CNOT(1, 2), CNOT(0, 1))
    out, entry = apply_rule(c, "6", [0, 1, 2])
    assert entry.census_before["cnot"] == 3 and entry.census_after["cnot"] == 2
    assert equal_up_to_global_phase(unitary(out), unitary(c))
    with pytest.raises(NoMatch):
        apply_rule(data(2, CNOT(0, 1)), "6", [0])


def test_rule9_rejects_non_commuting():
    with pytest.raises(NoMatch):
        apply_rule(data(3, CNOT(0, 1), CNOT(1, 2)), "9", [0, 1])


def test_unknown_rule():
    with pytest.raises(KeyError):
        get_rule("11")


def test_rule2_on_all_czs(initial):
    c = initial
    for i, g in enumerate(initial.gates):
        if g.kind is GateKind.CZ:
            c, _ = apply_rule(c, "2", [i])
    flipped = [g for g in c.gates if g.kind is GateKind.CZ]
    assert flipped == [CZ(g.qubits[1], g.qubits[0]) for g in initial.gates if g.kind is GateKind.CZ]
    assert verify_encoder(c, five_qubit_code()).passed


def test_to_cnot_only_on_encoder(initial):
    out, trace = to_cnot_only(initial)
    assert out.census().nonzero() == {"H": 4, "X": 2, "CNOT": 10}
    assert [e.rule for e in trace].count("2") == 6
    assert replay_trace(initial, trace) == out


def test_to_cnot_only_single_cz_and_fixpoint():
    out, _ = to_cnot_only(data(2, CZ(0, 1)))
    assert out.census().nonzero() == {"H": 2, "CNOT": 1}
    already = data(2, H(0), CNOT(0, 1))
    assert to_cnot_only(already)[0] == already


def test_cy_lowering_merges_phase():
    c = data(2, S(0), CY(0, 1))
    out, _ = to_cnot_only(c)
    assert not {g.kind for g in out.gates} & {GateKind.CY, GateKind.CZ, GateKind.Z, GateKind.S}
    assert equal_up_to_global_phase(unitary(out), unitary(c))


def test_absorb_initial_x():
    out, _ = absorb_initial_x(Circuit(1, (X(0),)))
    assert out.gates == () and out.inits == (QubitInit.ONE,)
    c = Circuit(2, (X(1),), (QubitInit.ZERO, D))
    out, trace = absorb_initial_x(c)
    assert out == c and "data qubit 1" in trace.notes[0]
    c = Circuit(2, (CNOT(1, 0), X(0)), (QubitInit.ZERO, D))
    out, trace = absorb_initial_x(c)
    assert out == c and trace.notes


def test_optimize_five_qubit(initial, optimized):
    out, trace = optimized
    assert out.census().nonzero() == {"H": 4, "CNOT": 8}
    assert out.inits.count(QubitInit.ONE) == 2
    assert verify_encoder(out, five_qubit_code()).passed
    assert initial.census().total - out.census().total == 4


def test_trace_replay_and_json(initial, optimized):
    out, trace = optimized
    assert replay_trace(initial, trace) == out
    again = RewriteTrace.from_json(trace.to_json())
    assert emit_circuit(replay_trace(initial, again)) == emit_circuit(out)


def test_monotone_after_lowering(optimized):
    _, trace = optimized
    counts = trace.two_qubit_counts()
    assert counts == sorted(counts, reverse=True)
    assert counts[-1] == 8


def test_commute_pass_is_permutation():
    c = data(4, CNOT(0, 3), CNOT(0, 1), CNOT(2, 1), H(0), CNOT(3, 2), CNOT(1, 2))
    out, _ = optimize(c, OptimizeConfig(passes=("commute",)))
    assert sorted(map(str, out.gates)) == sorted(map(str, c.gates))
    assert out.gates[:3] == (CNOT(0, 1), CNOT(2, 1), CNOT(0, 3))
    assert equal_up_to_global_phase(unitary(out), unitary(c))


def test_already_optimal_unchanged():
    c = data(2, CNOT(0, 1))
    out, trace = optimize(c)
    assert out == c and len(trace) == 0


def test_bad_config():
    with pytest.raises(ValueError, match="unknown pass"):
        OptimizeConfig(passes=("nope",))


@settings(max_examples=40)
@given(circuits(max_width=4, max_gates=16))
def test_optimize_preserves_unitary(c):
    out, trace = optimize(c)
    assert equal_up_to_global_phase(unitary(out), unitary(c))
    assert replay_trace(c, trace) == out


@settings(max_examples=25)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, n - 1))), st.integers(0, 2**32 - 1))
def test_optimize_preserves_encoders(nk, seed):
    n, k = nk
    code = random_code(np.random.default_rng(seed), n, k)
    enc = synthesize(code).circuit
    out, _ = optimize(enc)
    assert verify_encoder(enc, code).passed
    assert verify_encoder(out, code).passed
