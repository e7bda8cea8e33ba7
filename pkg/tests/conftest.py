import numpy as np
import pytest
from hypothesis import strategies as st

from chisq_homogeneity import custom_partition

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@st.composite
def partitions(draw, min_m=2, max_m=12):
    m = draw(st.integers(min_m, max_m))
    w = np.array(draw(st.lists(st.floats(0.2, 1.0), min_size=m, max_size=m)))
    edges = np.r_[0.0, np.cumsum(w) / w.sum()]
    edges[-1] = 1.0
    return custom_partition(edges)
