import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qencopt.circuit import CNOT, CY, CZ, SWAP, Circuit, H, QubitInit, S, Sdg, X, Y, Z
from qencopt.pauli import propagate
from qencopt.stabilizer import StabilizerCode, trivial_code

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

SINGLE = (H, X, Y, Z, S, Sdg)
TWO = (CNOT, CZ, CY)
TWO_WITH_SWAP = (CNOT, CZ, CY, SWAP)


def random_circuit(rng, n, m, two=TWO, single=SINGLE, inits=None):
    gates = []
    for _ in range(m):
        if n == 1 or rng.random() < 0.5:
            gates.append(single[rng.integers(len(single))](int(rng.integers(n))))
        else:
            a, b = rng.choice(n, 2, replace=False)
            gates.append(two[rng.integers(len(two))](int(a), int(b)))
    if inits is None:
        inits = (QubitInit.DATA,) * n
    return Circuit(n, tuple(gates), tuple(inits))


def random_code(rng, n, k, depth=30):
    """Scramble the trivial code with a random Clifford circuit."""
    scramble = random_circuit(rng, n, depth)

    def image(p):
        return propagate(scramble, [p])[0]

    base = trivial_code(n, k)
    return StabilizerCode(
        n, k,
        tuple(image(p) for p in base.stabilizers),
        tuple(image(p) for p in base.logical_x),
        tuple(image(p) for p in base.logical_z),
    )


@st.composite
def circuits(draw, min_width=1, max_width=4, max_gates=20, two=TWO):
    n = draw(st.integers(min_width, max_width))
    seed = draw(st.integers(0, 2**32 - 1))
    m = draw(st.integers(0, max_gates))
    return random_circuit(np.random.default_rng(seed), n, m, two=two)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
