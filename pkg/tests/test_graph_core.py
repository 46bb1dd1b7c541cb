import pytest
from hypothesis import given, settings, strategies as st

from conflict_stream import ColoredGraph
from conflict_stream.errors import ConstructionError, ParameterError
from conflict_stream.graph_core import (
    HardInstance,
    exact_monochromatic_count,
    monochromatic_degree,
    random_colored_graph,
    validate_promise,
)

from conftest import brute_graph_conflicts


def test_tiny_counts(tiny_graph):
    g = tiny_graph
    assert g.m == 4
    assert exact_monochromatic_count(g) == 3
    assert [monochromatic_degree(g, v) for v in range(5)] == [2, 2, 2, 0, 0]
    assert g.degree_sequence() == (2, 2, 3, 1, 0)
    assert g.has_edge(2, 3) and not g.has_edge(3, 4)


def test_empty_and_single_vertex():
    g = ColoredGraph.from_edges(1, [], [1])
    assert g.m == 0
    assert exact_monochromatic_count(g) == 0


@pytest.mark.parametrize(
    "n, edges, colors",
    [
        (3, [(0, 0)], [1, 1, 1]),
        (3, [(0, 1), (1, 0)], [1, 1, 1]),
        (3, [(0, 3)], [1, 1, 1]),
        (3, [(0, 1)], [0, 1, 1]),
        (0, [], []),
    ],
)
def test_from_edges_rejects(n, edges, colors):
    with pytest.raises(ParameterError):
        ColoredGraph.from_edges(n, edges, colors)


def test_asymmetric_adjacency_rejected():
    with pytest.raises(ParameterError):
        ColoredGraph(2, ((1,), ()), (1, 1), 1)


def test_monochromatic_degree_range(tiny_graph):
    with pytest.raises(ParameterError):
        monochromatic_degree(tiny_graph, 5)


def test_promise(tiny_graph):
    assert validate_promise(tiny_graph, 3)
    assert not validate_promise(tiny_graph, 4)


def test_hard_instance_checks_truth(tiny_graph):
    HardInstance(tiny_graph, 3, "manual", {})
    with pytest.raises(ConstructionError):
        HardInstance(tiny_graph, 2, "manual", {})


@settings(max_examples=60, deadline=None)
@given(
    n=st.integers(1, 40),
    p=st.floats(0, 1),
    colors=st.integers(1, 5),
    seed=st.integers(0, 2**32 - 1),
)
def test_oracle_matches_brute_force(n, p, colors, seed):
    g = random_colored_graph(n, p, colors, seed)
    assert exact_monochromatic_count(g) == brute_graph_conflicts(g)
    # handshake: monochromatic degrees sum to twice the count
    assert sum(monochromatic_degree(g, v) for v in range(n)) == 2 * exact_monochromatic_count(g)
    assert sum(g.degree_sequence()) == 2 * g.m


def test_random_graph_deterministic():
    assert random_colored_graph(30, 0.2, 3, 7) == random_colored_graph(30, 0.2, 3, 7)
