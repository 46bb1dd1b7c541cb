"""Conflict estimation in the plain vertex-arrival model.

One pass: vertex pairs are sampled before the stream starts, since an edge's
earlier endpoint gives no hint that it will matter later.  Two passes (warm
up): edges are sampled in pass one and checked in pass two.
"""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ..errors import ContractError
from ..streams import VA_FAMILY, EdgeToPast, SpaceMeter, VertexExposed, VertexStream
from .config import EstimatorConfig, EstimatorReport, clamp01, log_n


def pair_rate(cfg: EstimatorConfig, n: int) -> float:
    return clamp01(cfg.constant_scale * 30.0 * log_n(n) / (cfg.epsilon ** 2 * cfg.T))


def bernoulli_positions(rng: np.random.Generator, total: int, p: float) -> np.ndarray:
    """Indices in ``[0, total)`` kept independently with probability ``p``.

    Uses geometric gaps, so the cost is proportional to the number kept.
    """
    if p <= 0.0 or total <= 0:
        return np.empty(0, dtype=np.int64)
    if p >= 1.0:
        return np.arange(total, dtype=np.int64)
    chunks = []
    last = -1
    while True:
        size = max(16, int(1.2 * p * (total - last)) + 16)
        gaps = rng.geometric(p, size=size)
        pos = last + np.cumsum(gaps)
        cut = np.searchsorted(pos, total)
        chunks.append(pos[:cut])
        if cut < size:
            break
        last = int(pos[-1])
    return np.concatenate(chunks)


def decode_pairs(idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map pair index ``k = j(j-1)/2 + i`` (``i < j``) back to ``(i, j)``."""
    k = idx.astype(np.int64)
    j = ((1 + np.sqrt(1 + 8 * k.astype(np.float64))) // 2).astype(np.int64)
    # float rounding can be off by one near triangular numbers
    j -= (j * (j - 1) // 2 > k)
    j += ((j + 1) * j // 2 <= k)
    i = k - j * (j - 1) // 2
    return i, j


class VaEstimator:
    """Pair-sampling estimator; exact store-all mode when ``T <= n``."""

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg
        self.meter = SpaceMeter()
        self.p = 0.0
        self.partners: dict[int, set[int]] | None = None
        self.sampled_pairs = 0
        self.detected: list[tuple[int, int]] = []

    def run(self, stream: VertexStream) -> EstimatorReport:
        stream.require(*VA_FAMILY)
        cfg = self.cfg
        n = cfg.resolve_n(stream.n)
        start = time.perf_counter()
        if cfg.T <= n:
            count = _store_all_count(stream, self.meter)
            return EstimatorReport(float(count), self.meter.peak_words, seed=cfg.seed,
                                   regime="store-all", elapsed=time.perf_counter() - start)

        self.p = p = pair_rate(cfg, n)
        rng = np.random.default_rng(cfg.seed)
        all_pairs = p >= 1.0
        if all_pairs:
            self.sampled_pairs = n * (n - 1) // 2
        else:
            i, j = decode_pairs(bernoulli_positions(rng, n * (n - 1) // 2, p))
            partners: dict[int, set[int]] = {}
            for a, b in zip(i.tolist(), j.tolist()):
                partners.setdefault(a, set()).add(b)
                partners.setdefault(b, set()).add(a)
            self.partners = partners
            self.sampled_pairs = int(i.size)
        meter = self.meter
        meter.charge(2 * self.sampled_pairs)  # both ids of every pair in Z
        meter.charge(3)  # |S| counter, current vertex id and color

        colors: dict[int, int] = {}
        partners = self.partners
        detected = self.detected
        cur_color = 0
        for ev in stream:
            if type(ev) is VertexExposed:
                cur_color = ev.color
                if all_pairs or ev.v in partners:
                    colors[ev.v] = ev.color
                    meter.charge(1)
            elif type(ev) is EdgeToPast:
                v, u = ev
                if all_pairs or u in partners.get(v, ()):
                    if colors[u] == cur_color:
                        detected.append((u, v))
                        meter.charge(2)
        estimate = len(detected) / p
        return EstimatorReport(estimate, meter.peak_words, seed=cfg.seed, regime="sample",
                               detected=tuple(detected), elapsed=time.perf_counter() - start)


def _store_all_count(stream: VertexStream, meter: SpaceMeter) -> int:
    """Keep every vertex with its color and count conflicts exactly."""
    colors: dict[int, int] = {}
    meter.charge(1)
    count = 0
    cur_color = 0
    for ev in stream:
        if type(ev) is VertexExposed:
            cur_color = ev.color
            colors[ev.v] = ev.color
            meter.charge(2)
        elif type(ev) is EdgeToPast:
            if colors[ev.u] == cur_color:
                count += 1
    return count


def va_estimate(stream: VertexStream, cfg: EstimatorConfig) -> EstimatorReport:
    return VaEstimator(cfg).run(stream)


def two_pass_va_estimate(
    replay: Callable[[], VertexStream],
    cfg: EstimatorConfig,
) -> EstimatorReport:
    """Two-pass estimator; ``replay`` must hand out a fresh stream per call.

    Pass one counts ``m`` and keeps each edge with probability
    ``min(1, c*30 ln n / (eps^2 T))``.  Pass two either stores everything
    (``T <= m/n``) or checks the kept edges for conflicts.
    """
    if isinstance(replay, VertexStream) or not callable(replay):
        raise ContractError("two-pass estimation needs a replayable stream factory")
    start = time.perf_counter()
    meter = SpaceMeter()
    first = replay()
    first.require(*VA_FAMILY)
    n = cfg.resolve_n(first.n)
    p = pair_rate(cfg, n)
    rng = np.random.default_rng(cfg.seed)
    m = 0
    meter.charge(1)
    kept: set[tuple[int, int]] = set()
    for ev in first:
        if type(ev) is EdgeToPast:
            m += 1
            if p >= 1.0 or rng.random() < p:
                kept.add((ev.u, ev.v) if ev.u < ev.v else (ev.v, ev.u))
                meter.charge(2)

    second = replay()
    second.require(*VA_FAMILY)
    if second.n != n:
        raise ContractError("replayed stream differs from the first pass")
    if cfg.T * n <= m:
        meter.release(2 * len(kept))
        count = _store_all_count(second, meter)
        return EstimatorReport(float(count), meter.peak_words, seed=cfg.seed,
                               regime="store-all", elapsed=time.perf_counter() - start)

    endpoints = {x for e in kept for x in e}
    colors: dict[int, int] = {}
    detected: list[tuple[int, int]] = []
    cur_color = 0
    meter.charge(2)
    for ev in second:
        if type(ev) is VertexExposed:
            cur_color = ev.color
            if ev.v in endpoints:
                colors[ev.v] = ev.color
                meter.charge(1)
        elif type(ev) is EdgeToPast:
            key = (ev.u, ev.v) if ev.u < ev.v else (ev.v, ev.u)
            if key in kept and colors[ev.u] == cur_color:
                detected.append((ev.u, ev.v))
    return EstimatorReport(len(detected) / p, meter.peak_words, seed=cfg.seed, regime="sample",
                           detected=tuple(detected), elapsed=time.perf_counter() - start)
