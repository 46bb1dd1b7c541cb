"""One-sided tester: valid coloring vs. eps-far from valid, random vertex order."""

from __future__ import annotations

import math
import time

import numpy as np

from ..errors import ParameterError
from ..streams import VA_FAMILY, EdgeToPast, SpaceMeter, VertexExposed, VertexStream
from .config import FAR, VALID, EstimatorReport, clamp01, log_n


def separation_rate(m: int, n: int, constant_scale: float = 1.0) -> float:
    return clamp01(constant_scale * 10.0 * log_n(n) / math.sqrt(m))


def varand_separate(
    stream: VertexStream,
    m: int,
    epsilon: float,
    seed: int = 0,
    constant_scale: float = 1.0,
) -> EstimatorReport:
    """Keep each vertex with probability ``min(1, c*10 ln n / sqrt(m))``.

    Every arriving vertex is checked against the kept ones; a single
    conflicting edge among them means "Far".  A valid coloring can never be
    reported Far.  ``epsilon`` does not enter the rate; it only scopes the
    guarantee.
    """
    if m <= 0:
        raise ParameterError(f"edge count m must be positive, got {m}")
    if not 0.0 < epsilon <= 1.0:
        raise ParameterError(f"epsilon must lie in (0, 1], got {epsilon}")
    stream.require(*VA_FAMILY)
    start = time.perf_counter()
    n = stream.n
    p = separation_rate(m, n, constant_scale)
    rng = np.random.default_rng(seed)
    meter = SpaceMeter()
    meter.charge(2)  # current id and color
    stored: dict[int, int] = {}
    witness: tuple[int, int] | None = None
    cur, cur_color = -1, 0

    def maybe_store() -> None:
        if cur >= 0 and (p >= 1.0 or rng.random() < p):
            stored[cur] = cur_color
            meter.charge(2)

    for ev in stream:
        if type(ev) is VertexExposed:
            maybe_store()
            cur, cur_color = ev
        elif type(ev) is EdgeToPast and witness is None:
            if stored.get(ev.u) == cur_color:
                witness = (ev.u, cur)
                meter.charge(2)
    maybe_store()
    decision = FAR if witness is not None else VALID
    return EstimatorReport(0.0, meter.peak_words, decision=decision, seed=seed, regime="sample",
                           detected=(witness,) if witness else (),
                           elapsed=time.perf_counter() - start)
