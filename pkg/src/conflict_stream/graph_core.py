"""Vertex-colored graphs and the exact monochromatic-edge oracle.

Vertices are ``0..n-1``; colors are positive integers in ``1..C``.  Graphs are
immutable once built, so they can be handed to many concurrent trials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import ConstructionError, ParameterError


@dataclass(frozen=True)
class ColoredGraph:
    """Simple undirected graph with one color per vertex.

    ``adjacency[v]`` is the sorted tuple of neighbors of ``v``.  Use
    :meth:`from_edges` rather than the constructor when starting from an edge
    list.
    """

    n: int
    adjacency: tuple[tuple[int, ...], ...]
    colors: tuple[int, ...]
    color_count: int
    m: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"vertex count must be positive, got {self.n}")
        if len(self.adjacency) != self.n or len(self.colors) != self.n:
            raise ParameterError("adjacency and colors must have one entry per vertex")
        if self.color_count < 1:
            raise ParameterError("color_count must be positive")
        for v, c in enumerate(self.colors):
            if not 1 <= c <= self.color_count:
                raise ParameterError(f"vertex {v} has color {c} outside [1, {self.color_count}]")
        degree_sum = 0
        for v, nbrs in enumerate(self.adjacency):
            prev = -1
            for u in nbrs:
                if u <= prev:
                    raise ParameterError(f"neighbors of {v} not strictly sorted")
                if u == v:
                    raise ParameterError(f"self-loop at {v}")
                if not 0 <= u < self.n:
                    raise ParameterError(f"neighbor {u} of {v} out of range")
                prev = u
            degree_sum += len(nbrs)
        # symmetry: every (v, u) must have its mirror
        for v, nbrs in enumerate(self.adjacency):
            for u in nbrs:
                if u > v and not _sorted_contains(self.adjacency[u], v):
                    raise ParameterError(f"adjacency not symmetric at ({v}, {u})")
        object.__setattr__(self, "m", degree_sum // 2)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int]],
        colors: Sequence[int],
        color_count: int | None = None,
    ) -> "ColoredGraph":
        """Build a graph from an edge list; duplicate edges are rejected."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise ParameterError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ParameterError(f"edge ({u}, {v}) out of range for n={n}")
            if v in nbrs[u]:
                raise ParameterError(f"duplicate edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
        cols = tuple(int(c) for c in colors)
        if color_count is None:
            color_count = max(cols) if cols else 1
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), cols, int(color_count))

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adjacency[v]

    def color(self, v: int) -> int:
        self._check_vertex(v)
        return self.colors[v]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as ``(u, v)`` with ``u < v``, lexicographically sorted."""
        return [(u, v) for u, nbrs in enumerate(self.adjacency) for v in nbrs if u < v]

    def has_edge(self, u: int, v: int) -> bool:
        return _sorted_contains(self.adjacency[u], v)

    def degree_sequence(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise ParameterError(f"vertex {v} out of range [0, {self.n})")


def _sorted_contains(seq: Sequence[int], x: int) -> bool:
    lo, hi = 0, len(seq)
    while lo < hi:
        mid = (lo + hi) // 2
        if seq[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < len(seq) and seq[lo] == x


def exact_monochromatic_count(graph: ColoredGraph) -> int:
    """Number of edges whose endpoints share a color, each edge counted once."""
    colors = graph.colors
    total = 0
    for u, nbrs in enumerate(graph.adjacency):
        cu = colors[u]
        for v in nbrs:
            if v > u and colors[v] == cu:
                total += 1
    return total


def monochromatic_degree(graph: ColoredGraph, v: int) -> int:
    """Count of neighbors of ``v`` that carry ``v``'s color."""
    graph._check_vertex(v)
    cv = graph.colors[v]
    return sum(1 for u in graph.adjacency[v] if graph.colors[u] == cv)


def validate_promise(graph: ColoredGraph, T: int) -> bool:
    """True iff the graph has at least ``T`` monochromatic edges."""
    return exact_monochromatic_count(graph) >= T


@dataclass(frozen=True)
class HardInstance:
    """A generated graph together with the conflict count its construction guarantees.

    The guarantee is re-checked against the oracle on creation; a mismatch
    means the generator is wrong, so it raises instead of returning bad truth.
    """

    graph: ColoredGraph
    true_monochromatic: int
    construction: str
    parameters: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        actual = exact_monochromatic_count(self.graph)
        if actual != self.true_monochromatic:
            raise ConstructionError(
                f"{self.construction}: claimed {self.true_monochromatic} monochromatic "
                f"edges but the graph has {actual}"
            )


def random_colored_graph(n: int, p: float, color_count: int, seed: int) -> ColoredGraph:
    """Erdos-Renyi G(n, p) with a uniform random coloring from ``[color_count]``."""
    if n < 1 or color_count < 1 or not 0.0 <= p <= 1.0:
        raise ParameterError("need n >= 1, color_count >= 1 and p in [0, 1]")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    colors = rng.integers(1, color_count + 1, size=n)
    edges = zip(iu[keep].tolist(), ju[keep].tolist())
    return ColoredGraph.from_edges(n, edges, colors.tolist(), color_count)
