import numpy as np
import pytest

from coexist import fixtures


@pytest.fixture(scope="session")
def chain4():
    return fixtures.load("CHAIN4")


@pytest.fixture(scope="session")
def bool2():
    return fixtures.load("BOOL2")


@pytest.fixture(scope="session")
def c2xc3():
    return fixtures.load("C2xC3")


@pytest.fixture(scope="session")
def penta():
    return fixtures.load("PENTA")


@pytest.fixture(scope="session")
def qubit():
    return fixtures.load("QUBIT")


def random_unitary(rng, d=2):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def commuting_family(rng, qubit, k=4):
    """k effects diagonal in a common random basis."""
    u = random_unitary(rng)
    return [qubit.effect(u @ np.diag(rng.uniform(0, 1, size=2)) @ u.conj().T) for _ in range(k)]


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
