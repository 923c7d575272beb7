import numpy as np
import pytest

from cvteamwork import circuits

ACCEPTANCE_LINES: list[str] = []


def random_circuit(n, rng, depth=12, max_squeeze=0.8):
    """Random symplectic built from beam splitters, squeezers and C_Z gates."""
    op = circuits.identity(n)
    for _ in range(depth):
        kind = rng.integers(3) if n > 1 else 1
        if kind == 0:
            i, j = rng.choice(n, 2, replace=False)
            op = circuits.beam_splitter(int(i), int(j), float(rng.uniform(0.05, 0.95)), n) @ op
        elif kind == 1:
            s = float(np.exp(rng.uniform(-max_squeeze, max_squeeze)))
            op = circuits.single_mode_squeezer(int(rng.integers(n)), s, n) @ op
        else:
            i, j = rng.choice(n, 2, replace=False)
            op = circuits.cz_gate(int(i), int(j), float(rng.uniform(-1, 1)), n) @ op
    return op


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
