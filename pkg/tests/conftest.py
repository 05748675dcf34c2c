import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from linedelta.poly import Polynomial

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

finite = dict(allow_nan=False, allow_infinity=False)
reals = st.floats(-5, 5, **finite)
complexes = st.complex_numbers(max_magnitude=5, **finite)


@st.composite
def polynomials(draw, min_degree=1, max_degree=10, real=False):
    n = draw(st.integers(min_degree, max_degree))
    elem = reals if real else complexes
    lead = draw(elem.filter(lambda c: abs(c) >= 0.2))
    rest = draw(st.lists(elem, min_size=n, max_size=n))
    return Polynomial.from_coefficients([lead] + rest)


@st.composite
def root_lists(draw, min_size=1, max_size=10, real=False, spread=3.0):
    n = draw(st.integers(min_size, max_size))
    xs = draw(st.lists(st.floats(-spread, spread, **finite), min_size=n, max_size=n))
    if real:
        return xs
    ys = draw(st.lists(st.floats(-spread, spread, **finite), min_size=n, max_size=n))
    return [complex(x, y) for x, y in zip(xs, ys)]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, printed after the run
ACCEPTANCE = []


def report_criterion(number, title, ok, detail=""):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}"
    if detail:
        line += f" ({detail})"
    ACCEPTANCE.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)
