"""Verified local rewrites over Clifford circuits and the optimization pipeline.

Every rule works on a *window*: a list of gate indices whose gates touch a set
of qubits, with no other gate in the index span touching those qubits. The
rule's matcher turns the window into a replacement, which is spliced in at the
first window index. Rules that depend on initial states (4, 5 and X absorption)
also see the circuit's inits.

Each rule carries concrete instances which are checked against the dense
statevector oracle when the catalog is first built.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linear
from .circuit import (
    CNOT,
    CZ,
    H,
    S,
    X,
    Z,
    Circuit,
    CircuitError,
    Gate,
    GateCensus,
    GateKind,
    QubitInit,
    Sdg,
    require_valid,
)
from .pauli import gates_commute, same_clifford
from .statevector import equal_up_to_global_phase, simulate


class NoMatch(ValueError):
    """The rule does not apply at the requested location."""


@dataclass(frozen=True)
class Replacement:
    gates: tuple[Gate, ...]
    inits: tuple[tuple[int, QubitInit], ...] = ()


Matcher = Callable[[Sequence[Gate], Circuit, tuple[int, ...], dict], "Replacement | None"]


@dataclass(frozen=True)
class RuleInstance:
    """A concrete window used to check a rule against the dense oracle."""

    width: int
    window: tuple[Gate, ...]
    params: tuple[tuple[str, object], ...] = ()
    inits: tuple[QubitInit, ...] | None = None


@dataclass(frozen=True)
class RewriteRule:
    id: str
    name: str
    matcher: Matcher = field(repr=False, compare=False)
    instances: tuple[RuleInstance, ...] = field(default=(), repr=False, compare=False)
    bidirectional: bool = False
    init_dependent: bool = False

    def match(self, circuit: Circuit, location: Sequence[int], params: dict | None = None) -> Replacement:
        location = tuple(location)
        params = dict(params or {})
        _check_window(circuit, location)
        rep = self.matcher([circuit.gates[i] for i in location], circuit, location, params)
        if rep is None:
            raise NoMatch(f"rule {self.id} does not match at {list(location)}")
        return rep


@dataclass(frozen=True)
class TraceEntry:
    rule: str
    location: tuple[int, ...]
    census_before: dict
    census_after: dict
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {
            "rule": self.rule,
            "location": list(self.location),
            "census_before": self.census_before,
            "census_after": self.census_after,
        }
        if self.params:
            out["params"] = self.params
        return out

    @classmethod
    def from_dict(cls, d: dict) -> TraceEntry:
        return cls(d["rule"], tuple(d["location"]), d.get("census_before", {}), d.get("census_after", {}),
                   dict(d.get("params", {})))


@dataclass
class RewriteTrace:
    entries: list[TraceEntry] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def extend(self, other: RewriteTrace) -> None:
        self.entries += other.entries
        self.notes += other.notes

    def two_qubit_counts(self) -> list[int]:
        return [e.census_after["two_qubit_total"] for e in self.entries]

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps([e.as_dict() for e in self.entries], indent=indent)

    @classmethod
    def from_json(cls, text: str) -> RewriteTrace:
        return cls([TraceEntry.from_dict(d) for d in json.loads(text)])


# ---------------------------------------------------------------------------
# window mechanics

def _qubits(gates: Iterable[Gate]) -> set[int]:
    return {q for g in gates for q in g.qubits}


def _check_window(circuit: Circuit, location: tuple[int, ...]) -> None:
    if not location:
        raise NoMatch("empty window")
    if list(location) != sorted(set(location)):
        raise NoMatch("window indices must be strictly increasing")
    if location[0] < 0 or location[-1] >= len(circuit.gates):
        raise NoMatch(f"window {list(location)} is out of range")
    qs = _qubits(circuit.gates[i] for i in location)
    inside = set(location)
    for j in range(location[0], location[-1]):
        if j not in inside and qs & set(circuit.gates[j].qubits):
            raise NoMatch(f"gate {j} ({circuit.gates[j]}) interposes on the window qubits")


def _leading(circuit: Circuit, index: int, qubit: int) -> bool:
    return all(qubit not in g.qubits for g in circuit.gates[:index])


def _splice(circuit: Circuit, location: tuple[int, ...], rep: Replacement) -> Circuit:
    drop = set(location)
    gates = list(circuit.gates)
    out = gates[: location[0]]
    out += rep.gates
    out += [g for i, g in enumerate(gates) if i > location[0] and i not in drop]
    inits = list(circuit.inits)
    for q, init in rep.inits:
        inits[q] = init
    return Circuit(circuit.width, tuple(out), tuple(inits))


def apply_rule(
    circuit: Circuit, rule: RewriteRule | str, location: Sequence[int], params: dict | None = None
) -> tuple[Circuit, TraceEntry]:
    """Rewrite ``circuit`` at ``location``; raises :class:`NoMatch` if the rule does not apply."""
    if isinstance(rule, str):
        rule = get_rule(rule)
    params = dict(params or {})
    rep = rule.match(circuit, location, params)
    out = _splice(circuit, tuple(location), rep)
    require_valid(out)
    entry = TraceEntry(rule.id, tuple(location), circuit.census().as_dict(), out.census().as_dict(), params)
    return out, entry


# ---------------------------------------------------------------------------
# matchers

def _is(g: Gate, kind: GateKind, *qubits: int) -> bool:
    return g.kind is kind and (not qubits or g.qubits == qubits)


def _m_rule1(w, circ, loc, params):
    # X = H Z H and Z = H X H, in either direction.
    if len(w) == 1 and w[0].kind in (GateKind.X, GateKind.Z):
        q = w[0].qubits[0]
        other = Z if w[0].kind is GateKind.X else X
        return Replacement((H(q), other(q), H(q)))
    if len(w) == 3 and _is(w[0], GateKind.H) and _is(w[2], GateKind.H, *w[0].qubits):
        q = w[0].qubits[0]
        if _is(w[1], GateKind.Z, q):
            return Replacement((X(q),))
        if _is(w[1], GateKind.X, q):
            return Replacement((Z(q),))
    return None


def _m_rule2(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CZ:
        a, b = w[0].qubits
        return Replacement((CZ(b, a),))
    return None


def _m_rule3(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CZ:
        a, b = w[0].qubits
        return Replacement((H(b), CNOT(a, b), H(b)))
    if len(w) == 3 and w[1].kind is GateKind.CNOT:
        a, b = w[1].qubits
        if _is(w[0], GateKind.H, b) and _is(w[2], GateKind.H, b):
            return Replacement((CZ(a, b),))
    return None


def _m_rule4(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CNOT:
        c = w[0].control
        if circ.inits[c] is QubitInit.ZERO and _leading(circ, loc[0], c):
            return Replacement(())
    return None


def _m_rule5(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CNOT:
        t = w[0].target
        if circ.inits[t] is QubitInit.PLUS and _leading(circ, loc[0], t):
            return Replacement(())
    return None


def _m_rule6(w, circ, loc, params):
    if not w or any(g.kind is not GateKind.CNOT for g in w):
        return None
    qs = sorted(_qubits(w))
    if len(qs) > 3:
        return None
    m = linear.window_matrix(w, qs)
    best = linear.optimal_synthesize(m)
    if len(best.gates) >= len(w):
        return None
    return Replacement(tuple(g.remap(qs) for g in best.gates))


def _m_rule7(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CNOT:
        a, b = w[0].qubits
        return Replacement((H(a), H(b), CNOT(b, a), H(a), H(b)))
    if len(w) == 5 and w[2].kind is GateKind.CNOT:
        b, a = w[2].qubits
        if (_is(w[0], GateKind.H, a) and _is(w[1], GateKind.H, b)
                and _is(w[3], GateKind.H, a) and _is(w[4], GateKind.H, b)):
            return Replacement((CNOT(a, b),))
    return None


def _m_rule8(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CNOT:
        a, c = w[0].qubits
        b = params.get("via")
        if b is None or b in (a, c) or not 0 <= b < circ.width:
            return None
        return Replacement((CNOT(b, c), CNOT(a, b), CNOT(b, c), CNOT(a, b)))
    if len(w) == 4 and all(g.kind is GateKind.CNOT for g in w):
        b, c = w[0].qubits
        a, b2 = w[1].qubits
        if b2 == b and w[2] == w[0] and w[3] == w[1] and a != c:
            return Replacement((CNOT(a, c),))
    return None


def _m_rule9(w, circ, loc, params):
    # Reorder pairwise-commuting gates; ``order`` is a permutation of the window.
    order = params.get("order")
    if order is None:
        if len(w) != 2:
            return None
        order = [1, 0]
    order = list(order)
    if sorted(order) != list(range(len(w))):
        return None
    for i, j in itertools.combinations(range(len(w)), 2):
        if order.index(i) > order.index(j) and not gates_commute(w[i], w[j]):
            return None
    return Replacement(tuple(w[i] for i in order))


def _m_rule10(w, circ, loc, params):
    if len(w) == 2 and all(g.kind is GateKind.CNOT for g in w):
        (a, b), (a2, c) = w[0].qubits, w[1].qubits
        if a == a2 and len({a, b, c}) == 3:
            return Replacement((CNOT(b, c), CNOT(a, b), CNOT(b, c)))
    if len(w) == 3 and all(g.kind is GateKind.CNOT for g in w):
        (b, c), (a, b2) = w[0].qubits, w[1].qubits
        if b2 == b and w[2] == w[0] and len({a, b, c}) == 3:
            return Replacement((CNOT(a, b), CNOT(a, c)))
    return None


def _m_hh(w, circ, loc, params):
    if len(w) == 2 and _is(w[0], GateKind.H) and w[1] == w[0]:
        return Replacement(())
    return None


def _m_cnot_pair(w, circ, loc, params):
    if len(w) == 2 and w[0].kind is GateKind.CNOT and w[1] == w[0]:
        return Replacement(())
    return None


def _m_cy(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.CY:
        c, t = w[0].qubits
        # CZ then CNOT is controlled-(XZ) = controlled-(-iY); S on the control restores CY.
        return Replacement((S(c), CZ(c, t), CNOT(c, t)))
    return None


_PHASE_POWER = {GateKind.S: 1, GateKind.Z: 2, GateKind.SDG: 3}
_POWER_GATES = {0: (), 1: (S,), 2: (Z,), 3: (Sdg,)}


def _m_phase_merge(w, circ, loc, params):
    if len(w) == 2 and all(g.kind in _PHASE_POWER for g in w) and w[0].qubits == w[1].qubits:
        q = w[0].qubits[0]
        power = (_PHASE_POWER[w[0].kind] + _PHASE_POWER[w[1].kind]) % 4
        return Replacement(tuple(g(q) for g in _POWER_GATES[power]))
    return None


def _m_absorb_x(w, circ, loc, params):
    if len(w) == 1 and w[0].kind is GateKind.X:
        q = w[0].qubits[0]
        flip = {QubitInit.ZERO: QubitInit.ONE, QubitInit.ONE: QubitInit.ZERO}.get(circ.inits[q])
        if flip is not None and _leading(circ, loc[0], q):
            return Replacement((), ((q, flip),))
    return None


# ---------------------------------------------------------------------------
# catalog and registration check

_Z0 = QubitInit.ZERO
_D = QubitInit.DATA


def _inst(width, *gates, inits=None, **params):
    return RuleInstance(width, tuple(gates), tuple(sorted(params.items())), inits)


def _build_rules() -> list[RewriteRule]:
    from .circuit import CY

    return [
        RewriteRule("1", "X/Z conversion by H conjugation", _m_rule1,
                    (_inst(1, X(0)), _inst(1, Z(0)), _inst(1, H(0), Z(0), H(0)), _inst(1, H(0), X(0), H(0))),
                    bidirectional=True),
        RewriteRule("2", "CZ control/target interchange", _m_rule2, (_inst(2, CZ(0, 1)),), bidirectional=True),
        RewriteRule("3", "CZ/CNOT conversion by H on the target", _m_rule3,
                    (_inst(2, CZ(0, 1)), _inst(2, H(1), CNOT(0, 1), H(1)), _inst(2, CZ(1, 0))),
                    bidirectional=True),
        RewriteRule("4", "CNOT with |0> control is the identity", _m_rule4,
                    (_inst(2, CNOT(0, 1), inits=(_Z0, _D)), _inst(3, CNOT(2, 0), inits=(_D, _D, _Z0))),
                    init_dependent=True),
        RewriteRule("5", "CNOT with |+> target is the identity", _m_rule5,
                    (_inst(2, CNOT(0, 1), inits=(_D, QubitInit.PLUS)),), init_dependent=True),
        RewriteRule("6", "CNOT mirroring (optimal resynthesis of a <=3-qubit CNOT window)", _m_rule6,
                    (_inst(3, CNOT(0, 1), CNOT(1, 2), CNOT(0, 1)),
                     _inst(3, CNOT(1, 2), CNOT(0, 1), CNOT(1, 2)),
                     _inst(3, CNOT(2, 1), CNOT(2, 0), CNOT(1, 0)),
                     _inst(2, CNOT(0, 1), CNOT(1, 0), CNOT(0, 1), CNOT(1, 0)))),
        RewriteRule("7", "CNOT reversal with H on both qubits", _m_rule7,
                    (_inst(2, CNOT(0, 1)), _inst(2, H(0), H(1), CNOT(1, 0), H(0), H(1))), bidirectional=True),
        RewriteRule("8", "long-range CNOT through an intermediate qubit", _m_rule8,
                    (_inst(3, CNOT(0, 2), via=1),
                     _inst(3, CNOT(1, 2), CNOT(0, 1), CNOT(1, 2), CNOT(0, 1)),
                     _inst(3, CNOT(2, 0), via=1)),
                    bidirectional=True),
        RewriteRule("9", "commutation of commuting gates", _m_rule9,
                    (_inst(3, CNOT(0, 1), CNOT(0, 2)), _inst(3, CNOT(0, 2), CNOT(1, 2)),
                     _inst(2, Z(0), CNOT(0, 1)), _inst(3, CNOT(0, 1), CNOT(0, 2), CNOT(1, 2), order=[1, 0, 2])),
                    bidirectional=True),
        RewriteRule("10", "fan-out identity", _m_rule10,
                    (_inst(3, CNOT(0, 1), CNOT(0, 2)), _inst(3, CNOT(1, 2), CNOT(0, 1), CNOT(1, 2))),
                    bidirectional=True),
        RewriteRule("HH-cancel", "adjacent H pair", _m_hh, (_inst(1, H(0), H(0)),)),
        RewriteRule("CNOT-pair-cancel", "adjacent identical CNOT pair", _m_cnot_pair, (_inst(2, CNOT(0, 1), CNOT(0, 1)),)),
        RewriteRule("CY-expand", "CY as S, CZ, CNOT", _m_cy, (_inst(2, CY(0, 1)), _inst(2, CY(1, 0)))),
        RewriteRule("phase-merge", "adjacent diagonal phase gates", _m_phase_merge,
                    (_inst(1, S(0), S(0)), _inst(1, Z(0), Z(0)), _inst(1, S(0), Sdg(0)), _inst(1, Z(0), S(0)))),
        RewriteRule("X-absorb", "leading X folded into a basis-state init", _m_absorb_x,
                    (_inst(2, X(0), CNOT(0, 1), inits=(_Z0, _D)),
                     _inst(2, X(1), inits=(_D, QubitInit.ONE))),
                    init_dependent=True),
    ]


def _isometry(circuit: Circuit) -> np.ndarray:
    k = len(circuit.data_qubits)
    cols = []
    for b in range(2 ** k):
        e = np.zeros(2 ** k, dtype=complex)
        e[b] = 1
        cols.append(simulate(circuit, e).amplitudes)
    return np.stack(cols, axis=1)


def instance_sound(rule: RewriteRule, inst: RuleInstance, tol: float = 1e-9) -> bool:
    """Apply ``rule`` to one of its instances and compare with the dense oracle."""
    inits = inst.inits or (QubitInit.DATA,) * inst.width
    before = Circuit(inst.width, inst.window, inits)
    loc = tuple(range(len(inst.window)))
    if rule.id == "X-absorb":
        loc = (0,)
    after, _ = apply_rule(before, rule, loc, dict(inst.params))
    dense = equal_up_to_global_phase(_isometry(after), _isometry(before), tol)
    if rule.init_dependent:
        return dense
    symbolic = same_clifford(list(before.gates), list(after.gates), list(range(inst.width)))
    return dense and symbolic


@lru_cache(maxsize=None)
def _catalog() -> tuple[RewriteRule, ...]:
    rules = _build_rules()
    for rule in rules:
        for inst in rule.instances:
            if not instance_sound(rule, inst):
                raise AssertionError(f"rule {rule.id} failed its equivalence check on {inst.window}")
    return tuple(rules)


def rule_catalog() -> list[RewriteRule]:
    return list(_catalog())


def get_rule(rule_id: str) -> RewriteRule:
    for rule in _catalog():
        if rule.id == str(rule_id):
            return rule
    raise KeyError(f"unknown rule {rule_id!r}")


# ---------------------------------------------------------------------------
# passes

class _Run:
    """Mutable circuit plus the trace of rewrites applied to it."""

    def __init__(self, circuit: Circuit, trace: RewriteTrace | None = None):
        self.circuit = circuit
        self.trace = trace if trace is not None else RewriteTrace()

    def apply(self, rule_id: str, location: Sequence[int], params: dict | None = None) -> None:
        self.circuit, entry = apply_rule(self.circuit, rule_id, location, params)
        self.trace.entries.append(entry)

    def first(self, pred: Callable[[int, Gate], bool]) -> int | None:
        return next((i for i, g in enumerate(self.circuit.gates) if pred(i, g)), None)


@dataclass
class _Gathered:
    """A window collected by commutation: ``members`` join the anchor, ``ahead``
    are moved in front of it, everything else in the span stays behind."""

    anchor: int
    members: list[int]
    ahead: list[int]


def _gather(gates: Sequence[Gate], anchor: int, qubits: set[int], accept: Callable[[Gate], bool],
            limit: int | None = None) -> _Gathered:
    members: list[int] = []
    ahead: list[int] = []
    behind: list[int] = []
    window = [gates[anchor]]
    for j in range(anchor + 1, len(gates)):
        if limit is not None and len(members) >= limit:
            break
        g = gates[j]
        if not qubits & set(g.qubits):
            if all(gates_commute(g, gates[b]) for b in behind):
                ahead.append(j)
            else:
                behind.append(j)
            continue
        if accept(g) and all(gates_commute(g, gates[b]) for b in behind):
            members.append(j)
            window.append(g)
        elif all(gates_commute(g, w) for w in window) and all(gates_commute(g, gates[b]) for b in behind):
            ahead.append(j)
        else:
            behind.append(j)
    return _Gathered(anchor, members, ahead)


def _pull(run: _Run, found: _Gathered) -> tuple[int, ...]:
    """Make the gathered window contiguous via one Rule 9 move; returns its location."""
    window = [found.anchor] + found.members
    if not found.members:
        return (found.anchor,)
    span = list(range(min([found.anchor] + found.ahead), window[-1] + 1))
    ahead = [j for j in found.ahead if j < window[-1]]
    first = found.anchor + len(ahead)
    if span == window and not ahead:
        return tuple(window)
    placed = ahead + window
    order_abs = placed + [j for j in span if j not in placed]
    order = [span.index(j) for j in order_abs]
    if order != list(range(len(span))):
        run.apply("9", span, {"order": order})
    return tuple(range(first, first + len(window)))


def pass_cy_expand(run: _Run) -> None:
    while (i := run.first(lambda _, g: g.kind is GateKind.CY)) is not None:
        run.apply("CY-expand", [i])


def pass_phase_merge(run: _Run) -> None:
    changed = True
    while changed:
        changed = False
        gates = run.circuit.gates
        for i, g in enumerate(gates):
            if g.kind not in _PHASE_POWER:
                continue
            q = g.qubits[0]
            found = _gather(gates, i, {q}, lambda h: h.kind in _PHASE_POWER and h.qubits == (q,), limit=1)
            if found.members:
                run.apply("phase-merge", _pull(run, found))
                changed = True
                break


def _cz_indices(circuit: Circuit) -> list[int]:
    return [i for i, g in enumerate(circuit.gates) if g.kind is GateKind.CZ]


def _lowered_h_count(circuit: Circuit) -> int:
    scratch = _Run(circuit)
    pass_lower(scratch)
    pass_h_cancel(scratch)
    return scratch.circuit.census()[GateKind.H]


_EXHAUSTIVE_CZ = 8


def pass_orient(run: _Run) -> None:
    """Rule 2: pick CZ orientations so that lowering leaves the fewest H gates.

    Ties go to flipping more gates, then to the lexicographically first
    choice. Small circuits are searched exhaustively, larger ones greedily.
    """
    idx = _cz_indices(run.circuit)
    if not idx:
        return

    def oriented(flips: Sequence[bool]) -> Circuit:
        gates = list(run.circuit.gates)
        for i, f in zip(idx, flips):
            if f:
                a, b = gates[i].qubits
                gates[i] = CZ(b, a)
        return run.circuit.with_gates(gates)

    def key(flips):
        return (_lowered_h_count(oriented(flips)), -sum(flips), tuple(not f for f in flips))

    if len(idx) <= _EXHAUSTIVE_CZ:
        best = min(itertools.product((False, True), repeat=len(idx)), key=key)
    else:
        best = [True] * len(idx)
        for pos in range(len(idx)):
            trial = list(best)
            trial[pos] = not trial[pos]
            if key(trial) < key(best):
                best = trial
    for i, f in zip(idx, best):
        if f:
            run.apply("2", [i])


def pass_lower(run: _Run) -> None:
    """Rule 3 on every CZ and Rule 1 on every Z."""
    while (i := run.first(lambda _, g: g.kind in (GateKind.CZ, GateKind.Z))) is not None:
        run.apply("3" if run.circuit.gates[i].kind is GateKind.CZ else "1", [i])


def _cancel_pairs(run: _Run, rule_id: str, kind: GateKind) -> None:
    changed = True
    while changed:
        changed = False
        gates = run.circuit.gates
        for i, g in enumerate(gates):
            if g.kind is not kind:
                continue
            found = _gather(gates, i, set(g.qubits), lambda h, g=g: h == g, limit=1)
            if found.members:
                run.apply(rule_id, _pull(run, found))
                changed = True
                break


def pass_h_cancel(run: _Run) -> None:
    _cancel_pairs(run, "HH-cancel", GateKind.H)


def pass_cnot_cancel(run: _Run) -> None:
    _cancel_pairs(run, "CNOT-pair-cancel", GateKind.CNOT)


def pass_absorb_x(run: _Run) -> None:
    gates = run.circuit.gates
    for i in range(len(gates) - 1, -1, -1):
        g = run.circuit.gates[i]
        if g.kind is not GateKind.X:
            continue
        q = g.qubits[0]
        if run.circuit.inits[q] is QubitInit.DATA:
            run.trace.notes.append(f"X on data qubit {q} left in place")
        elif not _leading(run.circuit, i, q):
            run.trace.notes.append(f"X on qubit {q} is not the first gate on its wire; left in place")
        else:
            run.apply("X-absorb", [i])


def pass_commute(run: _Run) -> None:
    """Rule 9 canonicalization: sort runs of pairwise-commuting CNOTs by (target, control)."""
    gates = run.circuit.gates
    i = 0
    moves = []
    while i < len(gates):
        if gates[i].kind is not GateKind.CNOT:
            i += 1
            continue
        j = i + 1
        while (j < len(gates) and gates[j].kind is GateKind.CNOT
               and all(gates_commute(gates[j], gates[m]) for m in range(i, j))):
            j += 1
        block = list(range(i, j))
        order = sorted(range(len(block)), key=lambda k: (gates[i + k].target, gates[i + k].control, k))
        if order != list(range(len(block))):
            moves.append((block, order))
        i = j
    for block, order in moves:
        run.apply("9", block, {"order": order})


def _best_mirror(gates: Sequence[Gate], width: int) -> _Gathered | None:
    for i, g in enumerate(gates):
        if g.kind is not GateKind.CNOT:
            continue
        pair = set(g.qubits)
        options = [sorted(pair)] + [sorted(pair | {q}) for q in range(width) if q not in pair]
        best = None
        for qs in options:
            qset = set(qs)
            found = _gather(gates, i, qset, lambda h: h.kind is GateKind.CNOT and set(h.qubits) <= qset)
            window = [gates[i]] + [gates[j] for j in found.members]
            if len(window) < 2:
                continue
            used = sorted(_qubits(window))
            gain = len(window) - linear.cnot_distance(linear.window_matrix(window, used))
            if gain > 0 and (best is None or gain > best[0]):
                best = (gain, found)
        if best is not None:
            return best[1]
    return None


def pass_mirror(run: _Run) -> None:
    """Rule 6 on commutation-reachable CNOT windows of at most three qubits."""
    while (found := _best_mirror(run.circuit.gates, run.circuit.width)) is not None:
        run.apply("6", _pull(run, found))


PASSES: dict[str, Callable[[_Run], None]] = {
    "cy-expand": pass_cy_expand,
    "phase-merge": pass_phase_merge,
    "orient": pass_orient,
    "lower": pass_lower,
    "h-cancel": pass_h_cancel,
    "absorb-x": pass_absorb_x,
    "commute": pass_commute,
    "mirror": pass_mirror,
    "cnot-cancel": pass_cnot_cancel,
}

LOWERING_PASSES = ("cy-expand", "phase-merge", "orient", "lower", "h-cancel")
DEFAULT_PASSES = LOWERING_PASSES + ("absorb-x", "commute", "mirror", "cnot-cancel")


@dataclass(frozen=True)
class OptimizeConfig:
    passes: tuple[str, ...] = DEFAULT_PASSES
    max_rounds: int = 20

    def __post_init__(self):
        object.__setattr__(self, "passes", tuple(self.passes))
        unknown = [p for p in self.passes if p not in PASSES]
        if unknown:
            raise ValueError(f"unknown pass(es): {', '.join(unknown)}; known: {', '.join(PASSES)}")
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be positive")


def to_cnot_only(circuit: Circuit) -> tuple[Circuit, RewriteTrace]:
    """Lower CY, CZ and Z into CNOT, H and X (S gates survive only if unpaired)."""
    require_valid(circuit)
    run = _Run(circuit)
    for name in LOWERING_PASSES:
        PASSES[name](run)
    return run.circuit, run.trace


def absorb_initial_x(circuit: Circuit) -> tuple[Circuit, RewriteTrace]:
    """Fold leading X gates on |0>/|1> wires into the init; other X gates are reported in ``trace.notes``."""
    require_valid(circuit)
    run = _Run(circuit)
    pass_absorb_x(run)
    return run.circuit, run.trace


def optimize(circuit: Circuit, config: OptimizeConfig | None = None) -> tuple[Circuit, RewriteTrace]:
    """Run the configured passes in order, repeating until a round changes nothing."""
    config = config or OptimizeConfig()
    require_valid(circuit)
    run = _Run(circuit)
    for _ in range(config.max_rounds):
        before = run.circuit
        for name in config.passes:
            PASSES[name](run)
        if run.circuit == before:
            break
    run.trace.notes = list(dict.fromkeys(run.trace.notes))
    return run.circuit, run.trace


def replay_trace(circuit: Circuit, trace: RewriteTrace | Iterable[TraceEntry]) -> Circuit:
    for entry in trace:
        circuit, _ = apply_rule(circuit, entry.rule, entry.location, entry.params)
    return circuit


def census_delta(before: GateCensus, after: GateCensus) -> dict[str, int]:
    keys = sorted(set(before.nonzero()) | set(after.nonzero()))
    return {k: after.nonzero().get(k, 0) - before.nonzero().get(k, 0) for k in keys}


__all__ = [
    "CircuitError",
    "DEFAULT_PASSES",
    "NoMatch",
    "OptimizeConfig",
    "Replacement",
    "RewriteRule",
    "RewriteTrace",
    "TraceEntry",
    "absorb_initial_x",
    "apply_rule",
    "get_rule",
    "optimize",
    "replay_trace",
    "rule_catalog",
    "to_cnot_only",
]
