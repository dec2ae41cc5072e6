import numpy as np
import pytest

from peskin.spectral import grid

# filled by test_acceptance.py; echoed at the end of the session
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def trig_poly(rng, n, max_mode=6, ncomp=None, decay=1.5):
    """Random real trigonometric polynomial on an ``n``-point grid."""
    s = grid(n)
    shape = (n,) if ncomp is None else (ncomp, n)
    out = np.zeros(shape)
    for k in range(max_mode + 1):
        a, b = rng.normal(size=(2,) + shape[:-1]) / (1 + k) ** decay
        a = np.asarray(a)[..., None]
        b = np.asarray(b)[..., None]
        out = out + a * np.cos(k * s) + b * np.sin(k * s)
    return out
