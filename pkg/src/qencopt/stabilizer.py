"""Stabilizer codes, exact group membership and encoder verification."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .circuit import Circuit, QubitInit
from .pauli import PauliString, commutes, multiply, propagate


class CodeError(ValueError):
    pass


@dataclass(frozen=True)
class StabilizerCode:
    n: int
    k: int
    stabilizers: tuple[PauliString, ...]
    logical_x: tuple[PauliString, ...]
    logical_z: tuple[PauliString, ...]
    name: str = ""

    def __post_init__(self):
        for attr in ("stabilizers", "logical_x", "logical_z"):
            object.__setattr__(self, attr, tuple(getattr(self, attr)))

    @classmethod
    def from_strings(cls, stabilizers, logical_x=(), logical_z=(), name: str = "") -> StabilizerCode:
        stabs = tuple(PauliString.from_str(s) for s in stabilizers)
        lx = tuple(PauliString.from_str(s) for s in logical_x)
        lz = tuple(PauliString.from_str(s) for s in logical_z)
        n = stabs[0].n if stabs else (lx[0].n if lx else 0)
        return cls(n, n - len(stabs), stabs, lx, lz, name)

    def check_matrix(self) -> np.ndarray:
        if not self.stabilizers:
            return np.zeros((0, 2 * self.n), dtype=np.uint8)
        return np.array([s.symplectic for s in self.stabilizers], dtype=np.uint8)

    def problems(self) -> list[str]:
        out = []
        every = self.stabilizers + self.logical_x + self.logical_z
        if any(p.n != self.n for p in every):
            out.append("operator width differs from n")
            return out
        if len(self.stabilizers) != self.n - self.k:
            out.append(f"expected {self.n - self.k} stabilizers, got {len(self.stabilizers)}")
        if len(self.logical_x) != self.k or len(self.logical_z) != self.k:
            out.append(f"expected {self.k} logical X and Z operators")
        if any(not p.is_hermitian for p in every):
            out.append("operators must be Hermitian (phase +1 or -1)")
        for i, a in enumerate(self.stabilizers):
            for j in range(i + 1, len(self.stabilizers)):
                if not commutes(a, self.stabilizers[j]):
                    out.append(f"stabilizers {i} and {j} anticommute")
        if gf2.rank(self.check_matrix()) != len(self.stabilizers):
            out.append("stabilizers are not independent")
        for i, lx in enumerate(self.logical_x):
            for j, s in enumerate(self.stabilizers):
                if not commutes(lx, s):
                    out.append(f"logical X {i} anticommutes with stabilizer {j}")
        for i, lz in enumerate(self.logical_z):
            for j, s in enumerate(self.stabilizers):
                if not commutes(lz, s):
                    out.append(f"logical Z {i} anticommutes with stabilizer {j}")
        for i, lx in enumerate(self.logical_x):
            for j, lz in enumerate(self.logical_z):
                if commutes(lx, lz) == (i == j):
                    rel = "commute" if i == j else "anticommute"
                    out.append(f"logical X {i} and logical Z {j} {rel}")
        return out

    def check(self) -> None:
        problems = self.problems()
        if problems:
            raise CodeError("; ".join(problems))


def five_qubit_code() -> StabilizerCode:
    """The [[5,1,3]] code with generators XZZXI and its cyclic shifts."""
    return StabilizerCode.from_strings(
        ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"], ["XXXXX"], ["ZZZZZ"], name="five-qubit"
    )


def trivial_code(n: int, k: int) -> StabilizerCode:
    """Stabilizers Z_0..Z_{n-k-1}; logicals X/Z on the last k qubits."""
    stabs = [PauliString.single(n, q, "Z") for q in range(n - k)]
    lx = [PauliString.single(n, q, "X") for q in range(n - k, n)]
    lz = [PauliString.single(n, q, "Z") for q in range(n - k, n)]
    return StabilizerCode(n, k, tuple(stabs), tuple(lx), tuple(lz), name="trivial")


def parse_code(text: str) -> StabilizerCode:
    n = k = None
    stabs, lx, lz = [], [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise CodeError(f"line {lineno}: expected '<directive> <value>'")
        head, value = parts[0].lower(), parts[1]
        try:
            if head == "n":
                n = int(value)
            elif head == "k":
                k = int(value)
            elif head in ("stab", "logx", "logz"):
                if n is None or k is None:
                    raise CodeError(f"line {lineno}: 'n' and 'k' must precede operators")
                p = PauliString.from_str(value)
                if p.n != n:
                    raise CodeError(f"line {lineno}: operator has {p.n} qubits, expected {n}")
                {"stab": stabs, "logx": lx, "logz": lz}[head].append(p)
            else:
                raise CodeError(f"line {lineno}: unknown directive {head!r}")
        except ValueError as exc:
            if isinstance(exc, CodeError):
                raise
            raise CodeError(f"line {lineno}: {exc}") from None
    if n is None or k is None:
        raise CodeError("code file must define n and k")
    code = StabilizerCode(n, k, tuple(stabs), tuple(lx), tuple(lz))
    code.check()
    return code


def emit_code(code: StabilizerCode) -> str:
    lines = [f"n {code.n}", f"k {code.k}"]
    lines += [f"stab {p}" for p in code.stabilizers]
    lines += [f"logx {p}" for p in code.logical_x]
    lines += [f"logz {p}" for p in code.logical_z]
    return "\n".join(lines) + "\n"


def read_code(path) -> StabilizerCode:
    with open(path, encoding="utf-8") as fh:
        return parse_code(fh.read())


# ---------------------------------------------------------------------------
# group membership

@dataclass(frozen=True)
class Membership:
    """Outcome of decomposing a Pauli over a list of generators."""

    in_group: bool
    witness: tuple[int, ...] = ()
    phase_ok: bool = False
    # The product of the witness generators, in index order.
    representative: PauliString | None = None

    @property
    def ok(self) -> bool:
        return self.in_group and self.phase_ok


def decompose(p: PauliString, generators: Sequence[PauliString]) -> Membership:
    """Decide whether ``p`` is exactly a product of ``generators``.

    The bit pattern is solved by GF(2) elimination; the phase is then
    rebuilt from the witness combination and compared exactly.
    """
    if not generators:
        same = not any(p.x) and not any(p.z)
        return Membership(same, (), same and p.phase == 0, PauliString.identity(p.n))
    rows = np.array([g.symplectic for g in generators])
    combo = gf2.solve_left(rows, p.symplectic)
    if combo is None:
        return Membership(False)
    witness = tuple(int(i) for i in np.nonzero(combo)[0])
    rep = PauliString.identity(p.n)
    for i in witness:
        rep = multiply(rep, generators[i])
    return Membership(True, witness, rep.phase == p.phase, rep)


def same_group(a: Sequence[PauliString], b: Sequence[PauliString]) -> bool:
    """True iff the two independent generator lists generate the same group, signs included."""
    if len(a) != len(b):
        return False
    return all(decompose(p, b).ok for p in a)


# ---------------------------------------------------------------------------
# encoder verification

_INIT_STABILIZER = {QubitInit.ZERO: "Z", QubitInit.ONE: "Z", QubitInit.PLUS: "X"}


@dataclass(frozen=True)
class GeneratorCheck:
    name: str
    source: PauliString
    image: PauliString
    target: str
    witness: tuple[int, ...]
    passed: bool
    reason: str = ""
    sign: int = 1

    def as_dict(self) -> dict:
        return {
            "generator": self.name,
            "input": str(self.source),
            "image": str(self.image),
            "target": self.target,
            "witness": list(self.witness),
            "passed": self.passed,
            "reason": self.reason,
            "sign": self.sign,
        }


@dataclass(frozen=True)
class VerificationReport:
    checks: tuple[GeneratorCheck, ...] = field(default_factory=tuple)
    errors: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return not self.errors and all(c.passed for c in self.checks)

    def __bool__(self) -> bool:
        return self.passed

    @property
    def logical_frame(self) -> dict[str, int]:
        """Sign of each logical image relative to the code's own operator."""
        return {c.name: c.sign for c in self.checks if not c.name.startswith("init")}

    @property
    def failures(self) -> list[GeneratorCheck]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict:
        return {
            "verdict": "PASS" if self.passed else "FAIL",
            "errors": list(self.errors),
            "logical_frame": self.logical_frame,
            "checks": [c.as_dict() for c in self.checks],
        }


def verify_encoder(
    circuit: Circuit,
    code: StabilizerCode,
    data_qubits: Sequence[int] | None = None,
    strict_logical_phase: bool = False,
) -> VerificationReport:
    """Check that ``circuit`` maps its declared input state space onto the code.

    Every non-data qubit contributes the stabilizer of its initial state
    (+Z for |0>, -Z for |1>, +X for |+>); each image must be an element of
    the code's stabilizer group with the exact sign. Each data qubit's X and Z
    must map to the matching logical operator times a stabilizer element.

    The sign of a logical image is a labelling convention of the logical
    basis, so by default a ``-1`` is accepted and reported through
    :attr:`VerificationReport.logical_frame`. Pass ``strict_logical_phase``
    to require ``+1`` there as well.
    """
    if data_qubits is None:
        data_qubits = circuit.data_qubits
    data_qubits = list(data_qubits)
    if circuit.width != code.n:
        raise ValueError(f"circuit width {circuit.width} does not match code length {code.n}")
    if len(data_qubits) != code.k:
        raise ValueError(f"{len(data_qubits)} data qubits given for k={code.k}")

    n = code.n
    errors = []
    checks = []
    for q, init in enumerate(circuit.inits):
        if q in data_qubits:
            continue
        if init is QubitInit.DATA:
            errors.append(f"qubit {q} is marked data but not listed as a data qubit")
            continue
        src = PauliString.single(n, q, _INIT_STABILIZER[init])
        if init is QubitInit.ONE:
            src = -src
        (img,) = propagate(circuit, [src])
        m = decompose(img, code.stabilizers)
        reason = "" if m.ok else ("not in stabilizer group" if not m.in_group else "wrong sign")
        checks.append(GeneratorCheck(f"init[{q}]", src, img, "stabilizer group", m.witness, m.ok, reason))

    for i, q in enumerate(data_qubits):
        for letter, logicals in (("X", code.logical_x), ("Z", code.logical_z)):
            src = PauliString.single(n, q, letter)
            (img,) = propagate(circuit, [src])
            target = logicals[i]
            m = decompose(multiply(target, img), code.stabilizers)
            passed = m.ok or (m.in_group and not strict_logical_phase)
            if not m.in_group:
                reason = "not equivalent to logical operator"
            elif not m.phase_ok:
                reason = "wrong sign" if strict_logical_phase else "logical frame -1"
            else:
                reason = ""
            checks.append(
                GeneratorCheck(
                    f"{letter}[{q}]", src, img, f"logical {letter}{i} = {target}", m.witness, passed, reason,
                    sign=1 if m.phase_ok else -1,
                )
            )
    return VerificationReport(tuple(checks), tuple(errors))
