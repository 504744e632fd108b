import numpy as np
import pytest

from sepcanon import matcore


@pytest.fixture(params=matcore.available_backends())
def backend(request):
    """Run a test once per available eigensolver kernel."""
    previous = matcore.BACKEND
    matcore.use_backend(request.param)
    yield request.param
    matcore.use_backend(previous)


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (g + g.conj().T)


def random_psd(rng, n, rank):
    g = rng.normal(size=(n, rank)) + 1j * rng.normal(size=(n, rank))
    return g @ g.conj().T


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
