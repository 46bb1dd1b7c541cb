"""Shared estimator configuration and report types."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..errors import ParameterError

VALID = "Valid"
FAR = "Far"
NOT_APPLICABLE = "NotApplicable"

REGIMES = frozenset(
    {"store-all", "sample", "below-τ", "above-τ", "fallback-small-T", "bucketed", "exact-count"}
)


@dataclass(frozen=True)
class EstimatorConfig:
    """Accuracy target, promise and sampling knobs for one estimator run.

    ``constant_scale`` multiplies every constant that sets a sampling rate,
    sample size or regime threshold (30, 3000, 100, 63, 60, 10 and the
    random-prefix size).  ``n`` is optional; when given it must match the
    stream.
    """

    epsilon: float
    T: int
    constant_scale: float = 1.0
    seed: int = 0
    n: int | None = None

    def __post_init__(self) -> None:
        if not 0.0 < self.epsilon < 1.0:
            raise ParameterError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.T < 1:
            raise ParameterError(f"promise T must be >= 1, got {self.T}")
        if self.constant_scale <= 0:
            raise ParameterError("constant_scale must be positive")
        if self.n is not None and self.n < 1:
            raise ParameterError("n must be positive")

    def resolve_n(self, stream_n: int) -> int:
        if self.n is not None and self.n != stream_n:
            raise ParameterError(f"config n={self.n} but the stream has n={stream_n}")
        return stream_n


@dataclass(frozen=True)
class EstimatorReport:
    estimate: float
    peak_words: int
    decision: str = NOT_APPLICABLE
    seed: int = 0
    regime: str = "sample"
    detected: tuple[tuple[int, int], ...] = ()
    elapsed: float = field(default=0.0, compare=False)

    def __post_init__(self) -> None:
        if self.estimate < 0:
            raise ValueError("estimate must be non-negative")
        if self.regime not in REGIMES:
            raise ValueError(f"unknown regime {self.regime!r}")


def log_n(n: int) -> float:
    """Natural log used in every rate; floored at log 2 so n = 1 stays usable."""
    return math.log(max(n, 2))


def clamp01(p: float) -> float:
    return min(1.0, max(0.0, p))
