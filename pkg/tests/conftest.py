import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from portkit.fuzzy import make_triangular

settings.register_profile(
    "repo",
    deadline=None,
    derandomize=True,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@st.composite
def triangulars(draw, symmetric=False, lo=-3.0, hi=3.0):
    a = draw(st.floats(lo, hi))
    left = draw(st.floats(0.01, 2.0))
    right = left if symmetric else draw(st.floats(0.01, 2.0))
    return a, a + left, a + left + right


def seeded(generator, **kw):
    """Hypothesis strategy drawing a seed and building an object from a numpy generator."""
    return st.integers(0, 2**32 - 1).map(lambda s: generator(np.random.default_rng(s), **kw))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def tri():
    return make_triangular


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "REPORT", None)
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
        terminalreporter.write_line(line)
