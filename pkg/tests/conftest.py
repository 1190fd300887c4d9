import pytest

from hypercolour import Hypergraph, generate_blocked_instance, generate_random_simple

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def single_edge():
    return Hypergraph(3, 3, [(0, 1, 2)])


@pytest.fixture
def three_edges():
    return Hypergraph(9, 3, [(0, 1, 2), (3, 4, 5), (6, 7, 8)])


@pytest.fixture(scope="session")
def blocked():
    return generate_blocked_instance(7, 3, 3, seed=1)


@pytest.fixture(scope="session")
def desk():
    """n=200, k=3, 1600 edges, max degree 24 (used with q=48)."""
    return generate_random_simple(200, 3, 1600, 24, seed=1)
