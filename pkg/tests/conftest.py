import itertools

import pytest

from conflict_stream.graph_core import ColoredGraph

# lines recorded by test_acceptance, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


def brute_conflicts(n, edges, colors):
    """Independent oracle: scan every vertex pair, count joined same-colored ones."""
    eset = {frozenset(e) for e in edges}
    return sum(
        1
        for u, v in itertools.combinations(range(n), 2)
        if colors[u] == colors[v] and frozenset((u, v)) in eset
    )


def brute_graph_conflicts(g: ColoredGraph) -> int:
    return brute_conflicts(g.n, g.edges(), g.colors)


@pytest.fixture
def tiny_graph():
    # triangle 0-1-2 all color 1, pendant 3 (color 2) on 2, isolated 4
    return ColoredGraph.from_edges(5, [(0, 1), (1, 2), (0, 2), (2, 3)], [1, 1, 1, 2, 1])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
