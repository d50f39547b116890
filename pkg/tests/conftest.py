import numpy as np
import pytest

from entropic_bell import kernels

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # compile (or load cached) numba kernels before anything is timed
    a = np.array([[0.6, 0.1j], [-0.1j, 0.4]])
    kernels.jacobi_eigh(a)
    kernels.entropy_bits(np.array([0.5, 0.5]))
    kernels.joint3_entropies(np.full((2, 2, 2), 0.125))


@pytest.fixture
def rng():
    return np.random.default_rng(20070331)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
