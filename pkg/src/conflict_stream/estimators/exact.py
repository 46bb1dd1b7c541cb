"""Exact conflict counting in the edge-arrival model: one counter suffices."""

from __future__ import annotations

import time

from ..streams import EdgeEA, SpaceMeter, VertexStream
from .config import EstimatorReport


def ea_count(stream: VertexStream) -> EstimatorReport:
    stream.require("ea")
    start = time.perf_counter()
    meter = SpaceMeter()
    meter.charge(1)
    count = 0
    for ev in stream:
        if type(ev) is EdgeEA and ev.color_u == ev.color_v:
            count += 1
    return EstimatorReport(float(count), meter.peak_words, regime="exact-count",
                           elapsed=time.perf_counter() - start)
