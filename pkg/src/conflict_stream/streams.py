"""Stream models over a colored graph, the degree oracle, and the space meter.

A stream is a lazily produced, single-use sequence of events:

* VA / VAdeg / VArand: ``VertexExposed(v, color)`` followed by one
  ``EdgeToPast(v, u)`` per already-exposed neighbor ``u`` (ascending
  exposure time unless a ``block_order`` hook reorders them).
* AL: ``VertexExposed`` followed by ``EdgeAL(v, u)`` for every neighbor.
* EA: one ``EdgeEA(u, color_u, v, color_v)`` per edge.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator, NamedTuple, Sequence

import numpy as np

from .errors import ContractError, ParameterError
from .graph_core import ColoredGraph

ADVERSARIAL = "adversarial"
UNIFORM_RANDOM = "uniform-random"

VA_FAMILY = ("va", "vadeg", "varand")


class VertexExposed(NamedTuple):
    v: int
    color: int


class EdgeToPast(NamedTuple):
    v: int  # the vertex currently being exposed
    u: int  # an already-exposed neighbor


class EdgeAL(NamedTuple):
    v: int
    u: int


class EdgeEA(NamedTuple):
    u: int
    color_u: int
    v: int
    color_v: int


StreamEvent = VertexExposed | EdgeToPast | EdgeAL | EdgeEA


@dataclass(frozen=True)
class ArrivalOrder:
    """A permutation of the vertex set plus where it came from."""

    order: tuple[int, ...]
    provenance: str = ADVERSARIAL

    def __post_init__(self) -> None:
        n = len(self.order)
        if sorted(self.order) != list(range(n)):
            raise ParameterError("arrival order must be a permutation of 0..n-1")
        if self.provenance not in (ADVERSARIAL, UNIFORM_RANDOM):
            raise ParameterError(f"unknown provenance {self.provenance!r}")

    @classmethod
    def adversarial(cls, order: Sequence[int]) -> "ArrivalOrder":
        return cls(tuple(int(v) for v in order), ADVERSARIAL)

    @classmethod
    def uniform_random(cls, n: int, seed: int | np.random.Generator) -> "ArrivalOrder":
        rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
        return cls(tuple(rng.permutation(n).tolist()), UNIFORM_RANDOM)

    def __len__(self) -> int:
        return len(self.order)


class DegreeOracle:
    """Answers ``d_G(v)`` for vertices the stream has already exposed."""

    def __init__(self, graph: ColoredGraph):
        self._graph = graph
        self._exposed = bytearray(graph.n)
        self.current: int | None = None

    def _expose(self, v: int) -> None:
        self._exposed[v] = 1
        self.current = v

    def degree(self, v: int) -> int:
        if not 0 <= v < self._graph.n or not self._exposed[v]:
            raise ContractError(f"degree of vertex {v} requested before it was exposed")
        return len(self._graph.adjacency[v])


def degree_oracle(graph: ColoredGraph) -> DegreeOracle:
    return DegreeOracle(graph)


class VertexStream:
    """Single-use, pull-only event sequence tagged with its stream model.

    ``n`` is public to every consumer; ``oracle`` is set only for VAdeg
    streams and ``provenance`` records how the vertex order was chosen.
    """

    def __init__(
        self,
        events: Iterator[StreamEvent],
        model: str,
        n: int,
        provenance: str = ADVERSARIAL,
        oracle: DegreeOracle | None = None,
    ):
        self._events = events
        self._consumed = False
        self.model = model
        self.n = n
        self.provenance = provenance
        self.oracle = oracle

    def __iter__(self) -> Iterator[StreamEvent]:
        if self._consumed:
            raise ContractError("stream already consumed; one-pass streams cannot be replayed")
        self._consumed = True
        return self._events

    def require(self, *models: str) -> None:
        if self.model not in models:
            raise ContractError(f"expected a {'/'.join(models)} stream, got {self.model}")


BlockOrder = Callable[[int, list[int]], Sequence[int]]


def _va_events(
    graph: ColoredGraph,
    order: Sequence[int],
    oracle: DegreeOracle | None,
    block_order: BlockOrder | None,
) -> Iterator[StreamEvent]:
    pos = [0] * graph.n
    for i, v in enumerate(order):
        pos[v] = i
    adj = graph.adjacency
    colors = graph.colors
    for i, v in enumerate(order):
        if oracle is not None:
            oracle._expose(v)
        yield VertexExposed(v, colors[v])
        past = [u for u in adj[v] if pos[u] < i]
        past.sort(key=pos.__getitem__)
        if block_order is not None:
            reordered = list(block_order(v, past))
            if sorted(reordered) != sorted(past):
                raise ContractError("block_order hook must return a permutation of its input")
            past = reordered
        for u in past:
            yield EdgeToPast(v, u)


def _as_order(graph: ColoredGraph, order: ArrivalOrder | Sequence[int]) -> ArrivalOrder:
    if not isinstance(order, ArrivalOrder):
        order = ArrivalOrder.adversarial(order)
    if len(order) != graph.n:
        raise ParameterError(f"order has {len(order)} vertices, graph has {graph.n}")
    return order


def make_va_stream(
    graph: ColoredGraph,
    order: ArrivalOrder | Sequence[int],
    block_order: BlockOrder | None = None,
) -> VertexStream:
    """Vertex-arrival stream; ``block_order`` may reorder each vertex's edge block."""
    order = _as_order(graph, order)
    model = "varand" if order.provenance == UNIFORM_RANDOM else "va"
    return VertexStream(_va_events(graph, order.order, None, block_order), model, graph.n,
                        order.provenance)


def make_vadeg_stream(
    graph: ColoredGraph,
    order: ArrivalOrder | Sequence[int],
    block_order: BlockOrder | None = None,
) -> VertexStream:
    """Vertex-arrival stream that also carries a degree oracle."""
    order = _as_order(graph, order)
    oracle = degree_oracle(graph)
    return VertexStream(_va_events(graph, order.order, oracle, block_order), "vadeg", graph.n,
                        order.provenance, oracle)


def make_varand_stream(graph: ColoredGraph, seed: int) -> VertexStream:
    """Vertex arrival in a uniformly random order drawn from ``seed``."""
    return make_va_stream(graph, ArrivalOrder.uniform_random(graph.n, seed))


def make_al_stream(graph: ColoredGraph, order: ArrivalOrder | Sequence[int]) -> VertexStream:
    order = _as_order(graph, order)

    def events() -> Iterator[StreamEvent]:
        for v in order.order:
            yield VertexExposed(v, graph.colors[v])
            for u in graph.adjacency[v]:
                yield EdgeAL(v, u)

    return VertexStream(events(), "al", graph.n, order.provenance)


def make_ea_stream(
    graph: ColoredGraph,
    edge_order: Sequence[tuple[int, int]] | None = None,
) -> VertexStream:
    """Edge-arrival stream; defaults to sorted edge order."""
    edges = graph.edges()
    if edge_order is not None:
        given = sorted((min(u, v), max(u, v)) for u, v in edge_order)
        if given != edges:
            raise ParameterError("edge_order must list every edge of the graph exactly once")
        edges = [(int(u), int(v)) for u, v in edge_order]
    colors = graph.colors

    def events() -> Iterator[StreamEvent]:
        for u, v in edges:
            yield EdgeEA(u, colors[u], v, colors[v])

    return VertexStream(events(), "ea", graph.n)


def random_edge_order(graph: ColoredGraph, seed: int) -> list[tuple[int, int]]:
    edges = graph.edges()
    perm = np.random.default_rng(seed).permutation(len(edges))
    return [edges[i] for i in perm.tolist()]


class SpaceMeter:
    """Word ledger: every retained id, color, counter or sampled index costs one word."""

    __slots__ = ("current_words", "peak_words")

    def __init__(self) -> None:
        self.current_words = 0
        self.peak_words = 0

    def charge(self, words: int = 1) -> None:
        if words < 0:
            raise ValueError("charge must be non-negative")
        self.current_words += words
        if self.current_words > self.peak_words:
            self.peak_words = self.current_words

    def release(self, words: int = 1) -> None:
        if words < 0 or words > self.current_words:
            raise ValueError(f"cannot release {words} words with {self.current_words} held")
        self.current_words -= words
