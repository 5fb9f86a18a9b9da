import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from gedsearch.graph import build_graph

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = []


@st.composite
def graphs(draw, max_nodes=5, node_alphabet=("A", "B", "C"), edge_alphabet=("-", "=")):
    n = draw(st.integers(1, max_nodes))
    labels = draw(st.lists(st.sampled_from(node_alphabet), min_size=n, max_size=n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs))) if pairs else []
    elabels = draw(st.lists(st.sampled_from(edge_alphabet), min_size=len(chosen), max_size=len(chosen)))
    return build_graph(n, labels, sorted(chosen), elabels, (node_alphabet, edge_alphabet))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
