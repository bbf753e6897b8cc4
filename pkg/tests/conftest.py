import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from weyljacobi import JacobiCoefficients

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PHI = (1.0 + np.sqrt(5.0)) / 2.0


@pytest.fixture
def golden():
    return JacobiCoefficients([1.0], [1j, 0.0])


@st.composite
def coefficients(draw, min_n=1, max_n=10):
    """Coefficient sets from the box a in [0.5, 2], |Re b|, |Im b| <= 2."""
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rng = np.random.default_rng(seed)
    a = rng.uniform(0.5, 2.0, n - 1)
    b = rng.uniform(-2.0, 2.0, n) + 1j * rng.uniform(-2.0, 2.0, n)
    return JacobiCoefficients(a, b)


def random_unitary(rng, n=2):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


ACCEPTANCE_LINES = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def record(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
