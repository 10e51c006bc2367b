import numpy as np
import pytest

from edrlab import qalg
from edrlab.model import heisenberg_frame, pauli, scenario_model

ACCEPTANCE_LINES = []


def record_acceptance(number, passed, detail):
    line = f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append((number, line))
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def sx():
    return pauli("x")


@pytest.fixture
def sy():
    return pauli("y")


@pytest.fixture
def sz():
    return pauli("z")


@pytest.fixture
def rng():
    return qalg.make_rng(20240601)


@pytest.fixture
def fig2_frame():
    return heisenberg_frame(scenario_model("fig2"))


def ket(*bits):
    """Computational basis state |b0 b1 ...> with the first bit most significant."""
    v = np.zeros(2 ** len(bits), dtype=complex)
    v[int("".join(map(str, bits)), 2)] = 1.0
    return v
