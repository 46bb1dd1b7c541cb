"""Conflict estimation with a degree oracle ("sampling into the future").

When ``v`` is exposed the oracle gives ``d(v)``; the edges to the past give
``d^-(v)``, hence ``d^+(v) = d(v) - d^-(v)`` future neighbors.  Each future
index ``(v, k)``, ``k in [d^+(v)]``, is sampled independently.  Later, when
the ``k``-th future neighbor of a stored ``v`` arrives, the edge is checked
for a conflict iff ``(v, k)`` was sampled, which keeps the per-edge sampling
events independent.
"""

from __future__ import annotations

import time

import numpy as np

from ..errors import ContractError, IntegrityError
from ..streams import EdgeToPast, SpaceMeter, VertexExposed, VertexStream
from .config import EstimatorConfig, EstimatorReport, clamp01, log_n
from .va import _store_all_count

# registers for the vertex being exposed: id, color, d(v), d^-(v), plus cnt and |S|
_WORKING_WORDS = 6


class _Stored:
    __slots__ = ("color", "ell", "indices")

    def __init__(self, color: int, indices: frozenset[int] | None):
        self.color = color
        self.ell = 0
        # None means every future index was sampled (rate clamped to 1)
        self.indices = indices


class FutureSampler:
    """Shared machinery for both degree-oracle estimators.

    With ``tau=None`` the sampler never switches.  Otherwise, once ``cnt``
    (running sum of ``d^+``) exceeds ``tau``, sampling into ``Y`` stops, every
    later vertex is stored in ``B`` and conflicts inside ``B`` are counted
    exactly in ``c_gt_tau``.  Conflict checks for vertices already in ``A``
    continue until the stream ends.
    """

    def __init__(self, p: float, seed: int, tau: float | None = None):
        self.p = p
        self.tau = tau
        self.rng = np.random.default_rng(seed)
        self.meter = SpaceMeter()
        self.A: dict[int, _Stored] = {}
        self.B: dict[int, int] = {}
        self.S: list[tuple[int, int]] = []
        self.cnt = 0
        self.cnt_trace: list[int] = []
        self.c_gt_tau = 0
        self.switched_at: int | None = None
        self.y_size = 0

    def run(self, stream: VertexStream) -> None:
        stream.require("vadeg")
        oracle = stream.oracle
        if oracle is None:
            raise ContractError("VAdeg stream carries no degree oracle")
        meter = self.meter
        meter.charge(_WORKING_WORDS)
        A, B, S = self.A, self.B, self.S
        cur = -1
        cur_color = 0
        cur_deg = 0
        d_minus = 0
        for ev in stream:
            if type(ev) is VertexExposed:
                if cur >= 0:
                    self._finish(cur, cur_color, cur_deg - d_minus)
                cur, cur_color = ev
                cur_deg = oracle.degree(cur)
                d_minus = 0
            elif type(ev) is EdgeToPast:
                u = ev.u
                d_minus += 1
                st = A.get(u)
                if st is not None:
                    st.ell += 1
                    if (st.indices is None or st.ell in st.indices) and st.color == cur_color:
                        S.append((u, cur))
                        meter.charge(2)
                if B and B.get(u) == cur_color:
                    # B is non-empty, so cur will be stored in B as well
                    self.c_gt_tau += 1
        if cur >= 0:
            self._finish(cur, cur_color, cur_deg - d_minus)

    def _finish(self, v: int, color: int, d_plus: int) -> None:
        if d_plus < 0:
            raise IntegrityError(f"oracle degree of {v} below its observed past degree")
        self.cnt += d_plus
        self.cnt_trace.append(self.cnt)
        if self.tau is not None and self.cnt > self.tau:
            if self.switched_at is None:
                self.switched_at = v
            self.B[v] = color
            self.meter.charge(2)
            return
        if d_plus == 0:
            return
        if self.p >= 1.0:
            k, indices = d_plus, None
        else:
            k = int(self.rng.binomial(d_plus, self.p))
            if k == 0:
                return
            indices = frozenset((self.rng.choice(d_plus, size=k, replace=False) + 1).tolist())
        self.A[v] = _Stored(color, indices)
        self.y_size += k
        self.meter.charge(3 + k)  # id, color, ell, then one word per sampled index


def known_m_rate(cfg: EstimatorConfig, n: int) -> float:
    return clamp01(cfg.constant_scale * 30.0 * log_n(n) / (cfg.epsilon ** 2 * cfg.T))


def unknown_m_rate(cfg: EstimatorConfig, n: int) -> float:
    return clamp01(cfg.constant_scale * 3000.0 * log_n(n) / (cfg.epsilon ** 3 * cfg.T))


def switch_threshold(cfg: EstimatorConfig, n: int) -> float:
    """tau = c * 100 n T ln n."""
    return cfg.constant_scale * 100.0 * n * cfg.T * log_n(n)


def small_sample_cutoff(cfg: EstimatorConfig, n: int) -> float:
    """|S| at or below this is treated as noise: c * 60 ln n / eps^2."""
    return cfg.constant_scale * 60.0 * log_n(n) / cfg.epsilon ** 2


def vadeg_estimate_known_m(
    stream: VertexStream,
    m: int,
    cfg: EstimatorConfig,
    rate: float | None = None,
) -> EstimatorReport:
    """Estimator for a known edge count ``m``.

    ``rate`` overrides the sampling probability (used to compare traces with
    the unknown-``m`` variant, which samples at the eps^3 rate).
    """
    stream.require("vadeg")
    n = cfg.resolve_n(stream.n)
    start = time.perf_counter()
    if cfg.T * n <= m:
        meter = SpaceMeter()
        count = _store_all_count(stream, meter)
        return EstimatorReport(float(count), meter.peak_words, seed=cfg.seed,
                               regime="store-all", elapsed=time.perf_counter() - start)
    p = known_m_rate(cfg, n) if rate is None else clamp01(rate)
    sampler = FutureSampler(p, cfg.seed)
    sampler.run(stream)
    if sampler.cnt != m:
        raise IntegrityError(f"stream has {sampler.cnt} edges but m={m} was supplied")
    return EstimatorReport(len(sampler.S) / p, sampler.meter.peak_words, seed=cfg.seed,
                           regime="sample", detected=tuple(sampler.S),
                           elapsed=time.perf_counter() - start)


class VaDegEstimator:
    """Unknown-``m`` estimator; inspect ``sampler`` after :meth:`run`."""

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg
        self.sampler: FutureSampler | None = None
        self.c_leq_tau = 0.0

    def run(self, stream: VertexStream) -> EstimatorReport:
        stream.require("vadeg")
        cfg = self.cfg
        n = cfg.resolve_n(stream.n)
        start = time.perf_counter()
        p = unknown_m_rate(cfg, n)
        self.sampler = s = FutureSampler(p, cfg.seed, tau=switch_threshold(cfg, n))
        s.run(stream)
        if len(s.S) <= small_sample_cutoff(cfg, n):
            self.c_leq_tau = 0.0
        else:
            self.c_leq_tau = len(s.S) / p
        regime = "below-τ" if s.switched_at is None else "above-τ"
        return EstimatorReport(self.c_leq_tau + s.c_gt_tau, s.meter.peak_words, seed=cfg.seed,
                               regime=regime, detected=tuple(s.S),
                               elapsed=time.perf_counter() - start)


def vadeg_estimate(stream: VertexStream, cfg: EstimatorConfig) -> EstimatorReport:
    return VaDegEstimator(cfg).run(stream)
