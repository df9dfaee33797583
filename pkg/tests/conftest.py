import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_complex(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def random_state(rng, d, rank=None):
    g = random_complex(rng, d, rank or d)
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_unit(rng, d):
    v = random_complex(rng, d)
    return v / np.linalg.norm(v)


def random_measure(rng, p, k):
    """Moments of k random atoms with Dirichlet weights."""
    om = np.exp(2j * np.pi * rng.random(k))
    w = rng.dirichlet(np.ones(k))
    c = (w[None, :] * om[None, :] ** np.arange(1, p + 1)[:, None]).sum(axis=1)
    return om, w, c


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
