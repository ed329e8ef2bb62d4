"""Nearest-neighbour routing on rectangular grids.

Logical qubits are placed on grid cells. The routed circuit acts on physical
wires, one per cell in row-major order (``r * cols + c``); cells without a
logical qubit start in |0>. Swaps are never undone, so a routed circuit equals
the input followed by the residual permutation it reports.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .circuit import CNOT, SWAP, Circuit, Gate, GateKind, QubitInit, require_valid

MAX_SEARCH_WIDTH = 8

Cell = tuple[int, int]


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class GridLayout:
    rows: int
    cols: int
    # placement[q] is the (row, col) of logical qubit q
    placement: tuple[Cell, ...]

    def __post_init__(self):
        placement = tuple((int(r), int(c)) for r, c in self.placement)
        object.__setattr__(self, "placement", placement)
        if self.rows < 1 or self.cols < 1:
            raise LayoutError(f"grid must be at least 1x1, got {self.rows}x{self.cols}")
        for q, (r, c) in enumerate(placement):
            if not (0 <= r < self.rows and 0 <= c < self.cols):
                raise LayoutError(f"qubit {q} placed at ({r},{c}) outside the {self.rows}x{self.cols} grid")
        if len(set(placement)) != len(placement):
            raise LayoutError("placement is not injective")

    @property
    def width(self) -> int:
        return len(self.placement)

    @property
    def cells(self) -> int:
        return self.rows * self.cols

    def index(self, cell: Cell) -> int:
        return cell[0] * self.cols + cell[1]

    def cell(self, index: int) -> Cell:
        return divmod(index, self.cols)

    def physical(self, qubit: int) -> int:
        return self.index(self.placement[qubit])

    @classmethod
    def row_major(cls, rows: int, cols: int, width: int | None = None) -> GridLayout:
        width = rows * cols if width is None else width
        if width > rows * cols:
            raise LayoutError(f"{width} qubits do not fit a {rows}x{cols} grid")
        return cls(rows, cols, tuple(divmod(i, cols) for i in range(width)))

    def to_text(self) -> str:
        lines = [f"place {q} {r} {c}" for q, (r, c) in enumerate(self.placement)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, rows: int, cols: int) -> GridLayout:
        places: dict[int, Cell] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 4 or parts[0] != "place":
                raise LayoutError(f"line {lineno}: expected 'place <qubit> <row> <col>'")
            try:
                q, r, c = (int(p) for p in parts[1:])
            except ValueError:
                raise LayoutError(f"line {lineno}: qubit, row and col must be integers") from None
            if q in places:
                raise LayoutError(f"line {lineno}: qubit {q} placed twice")
            places[q] = (r, c)
        if sorted(places) != list(range(len(places))):
            raise LayoutError("layout must place qubits 0..n-1")
        return cls(rows, cols, tuple(places[q] for q in range(len(places))))

    def as_dict(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "placement": [list(p) for p in self.placement]}


def manhattan(a: Cell, b: Cell) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


@dataclass(frozen=True)
class NNCReport:
    ok: bool
    gate_index: int | None = None
    message: str = ""

    def __bool__(self) -> bool:
        return self.ok


def is_nnc(circuit: Circuit, layout: GridLayout) -> NNCReport:
    """Check every two-qubit gate acts on grid neighbours under a fixed layout."""
    if layout.width != circuit.width:
        raise LayoutError(f"layout places {layout.width} qubits but the circuit has {circuit.width}")
    for i, g in enumerate(circuit.gates):
        if not g.is_two_qubit:
            continue
        a, b = (layout.placement[q] for q in g.qubits)
        if manhattan(a, b) != 1:
            return NNCReport(False, i, f"gate {i} ({g}) joins {a} and {b}, distance {manhattan(a, b)}")
    return NNCReport(True)


@dataclass(frozen=True)
class RoutedCircuit:
    circuit: Circuit  # physical wires
    layout: GridLayout  # initial placement
    swap_count: int
    swap_indices: tuple[int, ...]
    # positions[k][q] = physical wire of logical q after the k-th inserted swap (k=0: initial)
    positions: tuple[tuple[int, ...], ...] = field(repr=False)

    @property
    def final_positions(self) -> tuple[int, ...]:
        return self.positions[-1]

    @property
    def final_permutation(self) -> dict[int, int]:
        """Logical qubit -> physical wire at the end of the circuit."""
        return {q: p for q, p in enumerate(self.final_positions)}

    def grid(self) -> GridLayout:
        """Layout that labels every physical wire by itself; the routed circuit is NNC under it."""
        return GridLayout.row_major(self.layout.rows, self.layout.cols)

    def decomposed(self) -> Circuit:
        return decompose_swaps(self.circuit)

    def with_restore(self) -> Circuit:
        """Append (not necessarily adjacent) swaps that undo every inserted swap's relabelling,
        spare wires included."""
        content = list(range(self.circuit.width))  # content[w] = wire whose start state sits on w
        for i in self.swap_indices:
            a, b = self.circuit.gates[i].qubits
            content[a], content[b] = content[b], content[a]
        extra = []
        for w in range(len(content)):
            if content[w] == w:
                continue
            src = content.index(w)
            extra.append(SWAP(w, src))
            content[w], content[src] = content[src], content[w]
        return self.circuit.with_gates(list(self.circuit.gates) + extra)

    def report(self) -> dict:
        return {
            "swap_count": self.swap_count,
            "final_permutation": {str(q): p for q, p in self.final_permutation.items()},
            "layout": self.layout.as_dict(),
            "census": self.circuit.census().as_dict(),
            "decomposed_census": self.decomposed().census().as_dict(),
        }


def _step_toward(src: Cell, dst: Cell) -> Cell:
    # Row first, then column.
    if src[0] != dst[0]:
        return (src[0] + (1 if dst[0] > src[0] else -1), src[1])
    return (src[0], src[1] + (1 if dst[1] > src[1] else -1))


def route(circuit: Circuit, layout: GridLayout) -> RoutedCircuit:
    """Insert swaps so every two-qubit gate acts on neighbouring cells.

    A distant gate moves its first operand (the control) toward the second
    along a row-first shortest path until the two are adjacent.
    """
    require_valid(circuit)
    if layout.width != circuit.width:
        raise LayoutError(f"layout places {layout.width} qubits but the circuit has {circuit.width}")
    pos = [layout.placement[q] for q in range(circuit.width)]
    occupant: dict[Cell, int] = {cell: q for q, cell in enumerate(pos)}
    gates: list[Gate] = []
    swaps: list[int] = []
    positions = [tuple(layout.index(c) for c in pos)]
    for g in circuit.gates:
        if g.is_two_qubit:
            a, b = g.qubits
            while manhattan(pos[a], pos[b]) > 1:
                nxt = _step_toward(pos[a], pos[b])
                here = pos[a]
                swaps.append(len(gates))
                gates.append(SWAP(layout.index(here), layout.index(nxt)))
                other = occupant.pop(nxt, None)
                occupant[nxt] = a
                pos[a] = nxt
                if other is None:
                    del occupant[here]
                else:
                    occupant[here] = other
                    pos[other] = here
                positions.append(tuple(layout.index(c) for c in pos))
        gates.append(g.remap({q: layout.index(pos[q]) for q in g.qubits}))
    inits = [QubitInit.ZERO] * layout.cells
    for q, init in enumerate(circuit.inits):
        inits[layout.physical(q)] = init
    out = Circuit(layout.cells, tuple(gates), tuple(inits))
    return RoutedCircuit(out, layout, len(swaps), tuple(swaps), tuple(positions))


def unroute(routed: RoutedCircuit) -> Circuit:
    """Drop inserted swaps and relabel the rest back to logical qubits."""
    width = routed.layout.width
    where = {routed.layout.physical(q): q for q in range(width)}
    swap_at = set(routed.swap_indices)
    gates = []
    for i, g in enumerate(routed.circuit.gates):
        if i in swap_at:
            a, b = g.qubits
            qa, qb = where.pop(a, None), where.pop(b, None)
            if qa is not None:
                where[b] = qa
            if qb is not None:
                where[a] = qb
            continue
        try:
            gates.append(g.remap(where))
        except KeyError:
            raise LayoutError(f"gate {i} ({g}) touches a wire holding no logical qubit") from None
    inits = tuple(routed.circuit.inits[routed.layout.physical(q)] for q in range(width))
    return Circuit(width, tuple(gates), inits)


def decompose_swaps(circuit: Circuit) -> Circuit:
    out = []
    for g in circuit.gates:
        if g.kind is GateKind.SWAP:
            a, b = g.qubits
            out += [CNOT(a, b), CNOT(b, a), CNOT(a, b)]
        else:
            out.append(g)
    return circuit.with_gates(out)


@dataclass(frozen=True)
class LayoutSearch:
    layout: GridLayout
    routed: RoutedCircuit
    evaluated: int
    swap_budget: int | None = None

    @property
    def swap_count(self) -> int:
        return self.routed.swap_count

    @property
    def within_budget(self) -> bool:
        return self.swap_budget is None or self.swap_count <= self.swap_budget

    def __iter__(self):
        return iter((self.layout, self.routed))


def _swaps_only(circuit: Circuit, cells: Sequence[Cell]) -> int:
    # Same walk as route(), counting only.
    pos = list(cells)
    occupant = {cell: q for q, cell in enumerate(pos)}
    count = 0
    for g in circuit.gates:
        if not g.is_two_qubit:
            continue
        a, b = g.qubits
        while manhattan(pos[a], pos[b]) > 1:
            nxt = _step_toward(pos[a], pos[b])
            here = pos[a]
            other = occupant.pop(nxt, None)
            occupant[nxt] = a
            pos[a] = nxt
            if other is None:
                del occupant[here]
            else:
                occupant[here] = other
                pos[other] = here
            count += 1
    return count


def search_layout(circuit: Circuit, rows: int, cols: int, swap_budget: int | None = None) -> LayoutSearch:
    """Exhaustive placement search minimizing the swaps inserted by :func:`route`.

    Placements are enumerated in lexicographic order of their cells, so the
    first minimum found is the lexicographically smallest one.
    """
    require_valid(circuit)
    n = circuit.width
    if n > MAX_SEARCH_WIDTH:
        raise LayoutError(f"exhaustive search is limited to {MAX_SEARCH_WIDTH} qubits; pass a layout instead")
    if n > rows * cols:
        raise LayoutError(f"{n} qubits do not fit a {rows}x{cols} grid")
    all_cells = [(r, c) for r in range(rows) for c in range(cols)]
    best = None
    best_cells = None
    evaluated = 0
    for cells in itertools.permutations(all_cells, n):
        evaluated += 1
        count = _swaps_only(circuit, cells)
        if best is None or count < best:
            best, best_cells = count, cells
            if best == 0:
                break
    layout = GridLayout(rows, cols, best_cells)
    return LayoutSearch(layout, route(circuit, layout), evaluated, swap_budget)


def embed(circuit: Circuit, layout: GridLayout) -> Circuit:
    """The input circuit relabelled onto physical wires of its initial placement."""
    inits = [QubitInit.ZERO] * layout.cells
    for q, init in enumerate(circuit.inits):
        inits[layout.physical(q)] = init
    gates = tuple(g.remap([layout.physical(q) for q in range(circuit.width)]) for g in circuit.gates)
    return Circuit(layout.cells, gates, tuple(inits))


def routing_equivalent(circuit: Circuit, routed: RoutedCircuit, tol: float = 1e-9) -> bool:
    """Dense check: routed circuit, with its residual permutation undone, equals the input."""
    from .statevector import equal_up_to_global_phase, unitary

    return equal_up_to_global_phase(unitary(routed.with_restore()), unitary(embed(circuit, routed.layout)), tol)
