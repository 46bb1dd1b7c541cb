"""Plain-text graph files.

Layout (whitespace separated, decimal)::

    n m C
    <vertex> <color>      # n lines, vertices 0-based, colors 1-based
    <u> <v>               # m lines, u < v, sorted

Writing is deterministic: vertices in order, edges sorted.
"""

from __future__ import annotations

from pathlib import Path

from .errors import ParameterError
from .graph_core import ColoredGraph


def format_graph(graph: ColoredGraph) -> str:
    lines = [f"{graph.n} {graph.m} {graph.color_count}"]
    lines += [f"{v} {c}" for v, c in enumerate(graph.colors)]
    lines += [f"{u} {v}" for u, v in graph.edges()]
    return "\n".join(lines) + "\n"


def write_graph(graph: ColoredGraph, path: str | Path) -> Path:
    path = Path(path)
    path.write_text(format_graph(graph))
    return path


def parse_graph(text: str) -> ColoredGraph:
    tokens = text.split()
    try:
        values = [int(t) for t in tokens]
    except ValueError as exc:
        raise ParameterError(f"graph file contains a non-integer token: {exc}") from None
    if len(values) < 3:
        raise ParameterError("graph file is missing its 'n m C' header")
    n, m, C = values[:3]
    expected = 3 + 2 * n + 2 * m
    if len(values) != expected:
        raise ParameterError(f"graph file has {len(values)} integers, header implies {expected}")
    colors = [0] * n
    seen = [False] * n
    body = values[3:3 + 2 * n]
    for v, c in zip(body[0::2], body[1::2]):
        if not 0 <= v < n or seen[v]:
            raise ParameterError(f"bad or repeated vertex line for vertex {v}")
        seen[v] = True
        colors[v] = c
    ev = values[3 + 2 * n:]
    edges = list(zip(ev[0::2], ev[1::2]))
    return ColoredGraph.from_edges(n, edges, colors, C)


def read_graph(path: str | Path) -> ColoredGraph:
    return parse_graph(Path(path).read_text())


def read_order(path: str | Path) -> list[int]:
    """Arrival order file: whitespace-separated vertex ids."""
    try:
        return [int(t) for t in Path(path).read_text().split()]
    except ValueError as exc:
        raise ParameterError(f"order file {path} contains a non-integer token: {exc}") from None
