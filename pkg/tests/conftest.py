import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from paretoagg import DecisionProblem

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: int(k[2:])):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def diag_problem():
    # perfectly informative 2x2x2 instance
    return DecisionProblem.from_arrays([[1, 0], [0, 1]], [[0, 1], [1, 0]])


@pytest.fixture
def blind_problem():
    # uninformative 2x1x2 instance
    return DecisionProblem.from_arrays([[1], [1]], [[0, 1], [1, 0]])


@st.composite
def priors(draw, m, lo=0.0):
    raw = draw(st.lists(st.floats(0.01, 1.0), min_size=m, max_size=m))
    p = np.array(raw) / sum(raw)
    return lo + (1 - m * lo) * p


@st.composite
def problems(draw, max_m=4, max_n=3, max_k=3):
    seed = draw(st.integers(0, 2**32 - 1))
    m = draw(st.integers(1, max_m))
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    return DecisionProblem.random(np.random.default_rng(seed), m, n, k)


@st.composite
def pools(draw, max_experts=5, max_m=4):
    """Random (priors, weights) in general position, near-interior."""
    seed = draw(st.integers(0, 2**32 - 1))
    r = np.random.default_rng(seed)
    m = draw(st.integers(3, max_m))
    n = draw(st.integers(2, max_experts))
    P = r.dirichlet(np.ones(m), size=n)
    P = 0.05 + (1 - 0.05 * m) * P
    w = r.uniform(0.2, 5.0, size=n)
    return P, w
