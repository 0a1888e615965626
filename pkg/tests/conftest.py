import random

import pytest

from ssporacle.circuit import MCX, X, Circuit
from ssporacle import sim


def random_classical_circuit(rng: random.Random, nq: int, ngates: int, max_controls: int = 4) -> Circuit:
    c = Circuit()
    c.new_register(nq, "q")
    for _ in range(ngates):
        k = rng.randint(0, min(max_controls, nq - 1))
        qs = rng.sample(range(nq), k + 1)
        c.append(MCX(qs[:-1], qs[-1]) if k else X(qs[0]))
    return c


@pytest.fixture
def rng():
    return random.Random(1234)


BACKENDS = ["python"] + (["cython"] if sim.BACKEND == "cython" else [])


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


# acceptance lines are printed after the run regardless of capture settings
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
