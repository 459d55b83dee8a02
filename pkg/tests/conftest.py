import numpy as np
import pytest

from qwalk import corpus
from qwalk.graphs import EdgeWeighting, Multigraph, build_search_instance, duplication


@pytest.fixture
def k22():
    return corpus.complete_bipartite(2, 2)


@pytest.fixture
def k3():
    return corpus.complete(3)


@pytest.fixture
def k3_search(k3):
    """Triangle with its third vertex marked and uniform weights."""
    return build_search_instance(k3, EdgeWeighting.uniform(duplication(k3)), [2])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def uniform_instance(g: Multigraph, marked):
    return build_search_instance(g, EdgeWeighting.uniform(duplication(g)), marked)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
