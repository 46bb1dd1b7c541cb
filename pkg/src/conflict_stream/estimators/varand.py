"""Conflict estimation when vertices arrive in uniformly random order.

The first ``Gamma`` vertices form a free uniform sample ``R``.  For every
vertex, ``kappa`` is its number of same-colored neighbors inside ``R``.
Vertices with ``kappa >= theta`` are "high": their monochromatic degree is
estimated as ``(n/|R|) kappa``.  Low vertices of ``R`` get their exact
monochromatic degree by the end of the stream; they are grouped into
geometric buckets and the bucket sizes are scaled up by ``n/|R|``.  The
output averages the two halves, since each edge is seen from both ends.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

from ..errors import ContractError, ParameterError
from ..streams import UNIFORM_RANDOM, VA_FAMILY, EdgeToPast, SpaceMeter, VertexExposed, VertexStream
from .config import EstimatorConfig, EstimatorReport, log_n
from .va import _store_all_count


def bucket_count(n: int, epsilon: float) -> int:
    """t = ceil(log_{1 + eps/10} n), at least 1."""
    return max(1, math.ceil(math.log(max(n, 1)) / math.log1p(epsilon / 10.0)))


def bucket_index(d: int, epsilon: float) -> int | None:
    """The ``j >= 1`` with ``(1+eps/10)^(j-1) <= d < (1+eps/10)^j``; None for d = 0."""
    if d < 0:
        raise ParameterError("degree must be non-negative")
    if d == 0:
        return None
    base = 1.0 + epsilon / 10.0
    j = int(math.floor(math.log(d) / math.log(base))) + 1
    while j > 1 and base ** (j - 1) > d:
        j -= 1
    while base ** j <= d:
        j += 1
    return j


def prefix_size(cfg: EstimatorConfig, n: int, t: int) -> int:
    """Gamma = min(n, ceil(c * (8t / sqrt(eps T)) * n * 3 ln n))."""
    raw = cfg.constant_scale * (8.0 * t / math.sqrt(cfg.epsilon * cfg.T)) * n * 3.0 * log_n(n)
    return max(1, min(n, math.ceil(raw)))


def high_threshold(r: int, n: int, cfg: EstimatorConfig, t: int) -> float:
    """theta = (|R|/n) * sqrt(eps T) / (8t)."""
    return (r / n) * math.sqrt(cfg.epsilon * cfg.T) / (8.0 * t)


@dataclass
class VaRandState:
    t: int = 0
    gamma: int = 0
    theta: float = 0.0
    R: dict[int, int] = field(default_factory=dict)           # vertex -> color
    kappa: dict[int, int] = field(default_factory=dict)       # kappa for R members
    high: dict[int, int] = field(default_factory=dict)        # every high vertex -> kappa
    d_hat: dict[int, int] = field(default_factory=dict)       # low members of R
    m_hat_h: float = 0.0
    m_hat_l: float = 0.0
    buckets: dict[int, int] = field(default_factory=dict)     # j -> |A_j|


class VaRandEstimator:
    """Random-order estimator; ``state`` stays available after :meth:`run`."""

    def __init__(self, cfg: EstimatorConfig):
        self.cfg = cfg
        self.meter = SpaceMeter()
        self.state = VaRandState()

    def run(self, stream: VertexStream) -> EstimatorReport:
        stream.require(*VA_FAMILY)
        if stream.provenance != UNIFORM_RANDOM:
            raise ContractError("random-order estimation requires a uniformly random vertex order")
        cfg = self.cfg
        n = cfg.resolve_n(stream.n)
        start = time.perf_counter()
        st = self.state
        st.t = t = bucket_count(n, cfg.epsilon)
        if cfg.T < cfg.constant_scale * 63.0 * t * t:
            count = _store_all_count(stream, self.meter)
            return EstimatorReport(float(count), self.meter.peak_words, seed=cfg.seed,
                                   regime="fallback-small-T", elapsed=time.perf_counter() - start)

        st.gamma = gamma = prefix_size(cfg, n, t)
        st.theta = theta = high_threshold(gamma, n, cfg, t)
        scale = n / gamma
        meter = self.meter
        meter.charge(4)  # m_hat_h, current id, color, kappa
        R, kappa, d_hat, high = st.R, st.kappa, st.d_hat, st.high
        seen = 0
        in_prefix = True
        cur, cur_color, cur_kappa = -1, 0, 0

        def close_vertex() -> None:
            if cur >= 0 and not in_prefix and cur_kappa >= theta:
                high[cur] = cur_kappa
                st.m_hat_h += scale * cur_kappa

        for ev in stream:
            if type(ev) is VertexExposed:
                close_vertex()
                if in_prefix and seen == gamma:
                    self._classify_prefix(scale)
                    in_prefix = False
                cur, cur_color = ev
                cur_kappa = 0
                seen += 1
                if in_prefix:
                    R[cur] = cur_color
                    kappa[cur] = 0
                    meter.charge(3)  # id, color, kappa
            elif type(ev) is EdgeToPast:
                u = ev.u
                if R.get(u) != cur_color:
                    continue
                if in_prefix:
                    kappa[u] += 1
                    kappa[cur] += 1
                else:
                    cur_kappa += 1
                    if u in d_hat:
                        d_hat[u] += 1
        close_vertex()
        if in_prefix:
            self._classify_prefix(scale)

        base = 1.0 + cfg.epsilon / 10.0
        for d in d_hat.values():
            j = bucket_index(d, cfg.epsilon)
            if j is None:
                continue
            if j not in st.buckets:
                st.buckets[j] = 0
                meter.charge(1)
            st.buckets[j] += 1
        st.m_hat_l = scale * sum(size * base ** j for j, size in st.buckets.items())
        estimate = (st.m_hat_h + st.m_hat_l) / 2.0
        return EstimatorReport(estimate, meter.peak_words, seed=cfg.seed, regime="bucketed",
                               elapsed=time.perf_counter() - start)

    def _classify_prefix(self, scale: float) -> None:
        st = self.state
        for v, k in st.kappa.items():
            if k >= st.theta:
                st.high[v] = k
                st.m_hat_h += scale * k
                self.meter.release(1)  # kappa no longer needed for high members
            else:
                st.d_hat[v] = k


def varand_estimate(stream: VertexStream, cfg: EstimatorConfig) -> EstimatorReport:
    return VaRandEstimator(cfg).run(stream)
