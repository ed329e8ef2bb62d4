"""Circuit intermediate representation shared by every pass.

A circuit is a width, a per-qubit initialization annotation and a flat,
time-ordered list of gates. Everything here is immutable; passes build new
circuits instead of editing old ones.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence


class GateKind(str, Enum):
    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    CNOT = "cnot"
    CZ = "cz"
    CY = "cy"
    SWAP = "swap"

    @property
    def arity(self) -> int:
        return 2 if self in TWO_QUBIT_KINDS else 1


TWO_QUBIT_KINDS = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.CY, GateKind.SWAP})
SINGLE_QUBIT_KINDS = frozenset(k for k in GateKind if k not in TWO_QUBIT_KINDS)


class QubitInit(str, Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    DATA = "data"


class CircuitError(ValueError):
    """Raised for malformed circuits or circuit files."""


@dataclass(frozen=True)
class Gate:
    kind: GateKind
    qubits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))

    @property
    def control(self) -> int:
        return self.qubits[0]

    @property
    def target(self) -> int:
        return self.qubits[-1]

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    def problems(self, width: int) -> list[str]:
        out = []
        if len(self.qubits) != self.kind.arity:
            out.append(f"{self.kind.value} expects {self.kind.arity} operands, got {len(self.qubits)}")
        if len(set(self.qubits)) != len(self.qubits):
            out.append("duplicate operands")
        for q in self.qubits:
            if q < 0 or q >= width:
                out.append(f"qubit {q} out of range for width {width}")
        return out

    def remap(self, mapping: Sequence[int] | dict[int, int]) -> Gate:
        return Gate(self.kind, tuple(mapping[q] for q in self.qubits))

    def __str__(self) -> str:
        return " ".join([self.kind.value, *map(str, self.qubits)])


# Short constructors; these read much better in tests and templates.
def H(q: int) -> Gate:
    return Gate(GateKind.H, (q,))


def X(q: int) -> Gate:
    return Gate(GateKind.X, (q,))


def Y(q: int) -> Gate:
    return Gate(GateKind.Y, (q,))


def Z(q: int) -> Gate:
    return Gate(GateKind.Z, (q,))


def S(q: int) -> Gate:
    return Gate(GateKind.S, (q,))


def Sdg(q: int) -> Gate:
    return Gate(GateKind.SDG, (q,))


def CNOT(c: int, t: int) -> Gate:
    return Gate(GateKind.CNOT, (c, t))


def CZ(c: int, t: int) -> Gate:
    return Gate(GateKind.CZ, (c, t))


def CY(c: int, t: int) -> Gate:
    return Gate(GateKind.CY, (c, t))


def SWAP(a: int, b: int) -> Gate:
    return Gate(GateKind.SWAP, (a, b))


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[int | None, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok

    def messages(self) -> list[str]:
        return [msg if idx is None else f"{msg} at gate {idx}" for idx, msg in self.violations]


@dataclass(frozen=True)
class Circuit:
    width: int
    gates: tuple[Gate, ...] = ()
    inits: tuple[QubitInit, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        inits = self.inits
        if inits is None:
            inits = (QubitInit.ZERO,) * self.width
        object.__setattr__(self, "inits", tuple(QubitInit(i) for i in inits))

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return Circuit(self.width, tuple(gates), self.inits)

    def with_inits(self, inits: Iterable[QubitInit]) -> Circuit:
        return Circuit(self.width, self.gates, tuple(inits))

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def data_qubits(self) -> list[int]:
        return [q for q, i in enumerate(self.inits) if i is QubitInit.DATA]

    def validate(self) -> ValidationReport:
        return validate(self)

    def census(self) -> GateCensus:
        return census(self)

    def __str__(self) -> str:
        return emit_circuit(self)


def validate(circuit: Circuit) -> ValidationReport:
    """Check every structural invariant; violations are collected, never raised."""
    found: list[tuple[int | None, str]] = []
    if circuit.width < 0:
        found.append((None, f"negative width {circuit.width}"))
    if len(circuit.inits) != circuit.width:
        found.append((None, f"{len(circuit.inits)} init annotations for width {circuit.width}"))
    for idx, gate in enumerate(circuit.gates):
        for msg in gate.problems(circuit.width):
            found.append((idx, msg))
    return ValidationReport(tuple(found))


def require_valid(circuit: Circuit) -> None:
    report = validate(circuit)
    if not report.ok:
        raise CircuitError("; ".join(report.messages()))


@dataclass(frozen=True)
class GateCensus:
    counts: dict[GateKind, int]

    def __getitem__(self, kind: GateKind | str) -> int:
        return self.counts.get(GateKind(kind), 0)

    @property
    def two_qubit_total(self) -> int:
        return sum(n for k, n in self.counts.items() if k in TWO_QUBIT_KINDS)

    @property
    def single_qubit_total(self) -> int:
        return sum(n for k, n in self.counts.items() if k in SINGLE_QUBIT_KINDS)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def as_dict(self) -> dict[str, int]:
        out = {k.value: self.counts.get(k, 0) for k in GateKind}
        out["two_qubit_total"] = self.two_qubit_total
        out["single_qubit_total"] = self.single_qubit_total
        return out

    def nonzero(self) -> dict[str, int]:
        """Compact ``{"H": 4, "CNOT": 8}`` view with upper-case kind names."""
        return {k.name.replace("SDG", "Sdg"): n for k, n in self.counts.items() if n}

    def to_json(self) -> str:
        return json.dumps(self.as_dict())


def census(circuit: Circuit) -> GateCensus:
    require_valid(circuit)
    counter = Counter(g.kind for g in circuit.gates)
    return GateCensus({k: counter.get(k, 0) for k in GateKind})


# ---------------------------------------------------------------------------
# text format

def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_circuit(text: str) -> Circuit:
    width = None
    inits: list[QubitInit] = []
    gates: list[Gate] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        head, *args = line.split()
        head = head.lower()
        try:
            nums = [int(a) for a in args] if head != "init" else None
        except ValueError:
            raise CircuitError(f"line {lineno}: non-integer operand in {line!r}") from None
        if width is None:
            if head != "qubits" or len(args) != 1:
                raise CircuitError(f"line {lineno}: expected 'qubits <n>' first")
            width = nums[0]
            if width < 0:
                raise CircuitError(f"line {lineno}: negative width")
            inits = [QubitInit.ZERO] * width
            continue
        if head == "qubits":
            raise CircuitError(f"line {lineno}: repeated 'qubits' directive")
        if head == "init":
            if len(args) != 2:
                raise CircuitError(f"line {lineno}: expected 'init <q> <zero|one|plus|data>'")
            try:
                q, kind = int(args[0]), QubitInit(args[1].lower())
            except ValueError:
                raise CircuitError(f"line {lineno}: bad init directive {line!r}") from None
            if not 0 <= q < width:
                raise CircuitError(f"line {lineno}: qubit {q} out of range for width {width}")
            inits[q] = kind
            continue
        try:
            kind = GateKind(head)
        except ValueError:
            raise CircuitError(f"line {lineno}: unknown directive {head!r}") from None
        gate = Gate(kind, tuple(nums))
        problems = gate.problems(width)
        if problems:
            raise CircuitError(f"line {lineno}: {'; '.join(problems)}")
        gates.append(gate)
    if width is None:
        raise CircuitError("missing 'qubits <n>' directive")
    return Circuit(width, tuple(gates), tuple(inits))


def emit_circuit(circuit: Circuit) -> str:
    lines = [f"qubits {circuit.width}"]
    lines += [f"init {q} {i.value}" for q, i in enumerate(circuit.inits)]
    lines += [str(g) for g in circuit.gates]
    return "\n".join(lines) + "\n"


def read_circuit(path) -> Circuit:
    with open(path, encoding="utf-8") as fh:
        return parse_circuit(fh.read())


def write_circuit(circuit: Circuit, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(emit_circuit(circuit))
