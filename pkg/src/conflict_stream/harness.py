"""Experiment runner: build an instance, replay seeded streams, score against the oracle.

Estimators only ever see streams.  The oracle count is computed once per
instance and used for scoring after each trial.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import generators
from .errors import ConfigError, ConflictStreamError, ParameterError, PromiseViolation
from .estimators import (
    FAR,
    VALID,
    EstimatorConfig,
    EstimatorReport,
    bucket_count,
    ea_count,
    two_pass_va_estimate,
    va_estimate,
    vadeg_estimate,
    vadeg_estimate_known_m,
    varand_estimate,
    varand_separate,
)
from .estimators.config import log_n
from .graph_core import ColoredGraph, HardInstance, exact_monochromatic_count
from .graph_io import read_graph, read_order
from .streams import (
    ArrivalOrder,
    make_al_stream,
    make_ea_stream,
    make_va_stream,
    make_vadeg_stream,
    random_edge_order,
)

log = logging.getLogger(__name__)

MODELS = ("va", "vadeg", "varand", "ea", "al", "sep")

# estimator name -> stream model it consumes
ESTIMATOR_MODEL = {
    "va_estimate": "va",
    "two_pass_va_estimate": "va",
    "vadeg_estimate_known_m": "vadeg",
    "vadeg_estimate": "vadeg",
    "varand_estimate": "varand",
    "ea_count": "ea",
    "varand_separate": "sep",
}
DEFAULT_ESTIMATOR = {
    "va": "va_estimate",
    "vadeg": "vadeg_estimate",
    "varand": "varand_estimate",
    "ea": "ea_count",
    "sep": "varand_separate",
}
ALIASES = {
    "va": "va_estimate",
    "two-pass": "two_pass_va_estimate",
    "vadeg-known-m": "vadeg_estimate_known_m",
    "vadeg": "vadeg_estimate",
    "varand": "varand_estimate",
    "ea": "ea_count",
    "sep": "varand_separate",
}
# estimators whose sampling rates depend on the promise T
USES_PROMISE = {
    "va_estimate", "two_pass_va_estimate", "vadeg_estimate_known_m", "vadeg_estimate",
    "varand_estimate",
}

GENERATORS: dict[str, Callable[..., HardInstance]] = {
    "planted": generators.gen_planted,
    "erdos-renyi": generators.gen_erdos_renyi,
    "index-va": generators.gen_index_va,
    "index-vadeg": generators.gen_index_vadeg,
    "index-sep": generators.gen_index_sep,
    "cliques": generators.gen_disjointness_cliques,
    "valid": generators.gen_valid,
    "far-matching": generators.gen_far_matching,
    "far-star": generators.gen_far_star,
}


def build_instance(spec: dict[str, Any] | str | Path) -> HardInstance:
    """Instance from a generator spec ``{"construction": name, **kwargs}`` or a graph file."""
    if isinstance(spec, (str, Path)):
        g = read_graph(spec)
        return HardInstance(g, exact_monochromatic_count(g), "file", {"path": str(spec)})
    spec = dict(spec)
    if "graph" in spec:
        return build_instance(spec["graph"])
    name = spec.pop("construction", None)
    if name not in GENERATORS:
        raise ConfigError(f"unknown construction {name!r}; choose from {sorted(GENERATORS)}")
    try:
        return GENERATORS[name](**spec)
    except TypeError as exc:
        raise ConfigError(f"bad parameters for {name}: {exc}") from None


@dataclass
class ExperimentConfig:
    instance: dict[str, Any] | str
    model: str
    estimator: str | None = None
    epsilon: float = 0.3
    T: int = 1
    scale: float = 1.0
    m: int | None = None
    trials: int = 1
    base_seed: int = 0
    out: str | None = None
    order_file: str | None = None
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.model not in MODELS:
            raise ConfigError(f"unknown model {self.model!r}; choose from {MODELS}")
        est = self.estimator or DEFAULT_ESTIMATOR.get(self.model)
        if est is None:
            raise ConfigError(f"no estimator consumes model {self.model!r}")
        est = ALIASES.get(est, est)
        if est not in ESTIMATOR_MODEL:
            raise ConfigError(f"unknown estimator {est!r}")
        if ESTIMATOR_MODEL[est] != self.model:
            raise ConfigError(f"estimator {est} needs model {ESTIMATOR_MODEL[est]}, got {self.model}")
        self.estimator = est
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "ExperimentConfig":
        known = set(cls.__dataclass_fields__)
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        return cls(**data)


@dataclass(frozen=True)
class TrialRecord:
    trial: int
    seed: int
    estimate: float
    truth: int
    rel_error: float
    peak_words: int
    decision: str
    regime: str


@dataclass
class TrialStats:
    config: dict[str, Any]
    truth: int
    n: int
    m: int
    trials: list[TrialRecord]
    success_rate: float
    mean_rel_error: float
    median_rel_error: float
    max_peak_words: int
    bound: float
    bound_ratio: float
    soundness_rate: float | None = None
    completeness_rate: float | None = None
    extra: dict[str, Any] = field(default_factory=dict)

    def summary(self) -> dict[str, Any]:
        d = asdict(self)
        d.pop("trials")
        return d


def theoretical_bound(estimator: str, n: int, m: int, T: int, epsilon: float) -> float:
    """Space bound (words) each estimator is compared against, polylogs made explicit."""
    ln = log_n(n)
    if estimator == "va_estimate":
        return n * n * ln / (epsilon ** 2 * T)
    if estimator in ("vadeg_estimate", "vadeg_estimate_known_m", "two_pass_va_estimate"):
        return max(m / T, n) * ln
    if estimator == "varand_estimate":
        return n / math.sqrt(T) * bucket_count(n, epsilon) * ln
    if estimator == "varand_separate":
        return n * ln / math.sqrt(epsilon * max(m, 1))
    return 1.0


def trial_seeds(base_seed: int, trials: int) -> list[int]:
    children = np.random.SeedSequence(base_seed).spawn(trials)
    return [int(c.generate_state(1, dtype=np.uint32)[0]) for c in children]


def run_trial(
    graph: ColoredGraph,
    cfg: ExperimentConfig,
    seed: int,
    order: list[int] | None = None,
) -> EstimatorReport:
    """One estimator run on a fresh stream; the stream order derives from ``seed``."""
    est = cfg.estimator
    order_rng = np.random.default_rng([seed, 1])
    if order is not None:
        arrival = ArrivalOrder.adversarial(order)
    elif cfg.model in ("varand", "sep"):
        arrival = ArrivalOrder.uniform_random(graph.n, order_rng)
    else:
        # adversarial model: any order is legal, a seeded shuffle keeps trials distinct
        arrival = ArrivalOrder.adversarial(order_rng.permutation(graph.n).tolist())
    m = cfg.m if cfg.m is not None else graph.m
    if est == "ea_count":
        return ea_count(make_ea_stream(graph, random_edge_order(graph, seed)))
    if est == "varand_separate":
        return varand_separate(make_va_stream(graph, arrival), m, cfg.epsilon, seed, cfg.scale)
    ecfg = EstimatorConfig(cfg.epsilon, cfg.T, cfg.scale, seed)
    if est == "va_estimate":
        return va_estimate(make_va_stream(graph, arrival), ecfg)
    if est == "two_pass_va_estimate":
        return two_pass_va_estimate(lambda: make_va_stream(graph, arrival), ecfg)
    if est == "vadeg_estimate_known_m":
        return vadeg_estimate_known_m(make_vadeg_stream(graph, arrival), m, ecfg)
    if est == "vadeg_estimate":
        return vadeg_estimate(make_vadeg_stream(graph, arrival), ecfg)
    if est == "varand_estimate":
        return varand_estimate(make_va_stream(graph, arrival), ecfg)
    raise ConfigError(f"unknown estimator {est!r}")


_WORKER_STATE: dict[str, Any] = {}


def _init_worker(graph: ColoredGraph, cfg: ExperimentConfig, order: list[int] | None) -> None:
    _WORKER_STATE.update(graph=graph, cfg=cfg, order=order)


def _worker(seed: int) -> EstimatorReport:
    s = _WORKER_STATE
    return run_trial(s["graph"], s["cfg"], seed, s["order"])


def run_experiment(cfg: ExperimentConfig, instance: HardInstance | None = None) -> TrialStats:
    """Run ``cfg.trials`` seeded trials and aggregate them in trial order."""
    if instance is None:
        instance = build_instance(cfg.instance)
    graph = instance.graph
    truth = instance.true_monochromatic
    if cfg.estimator in USES_PROMISE:
        try:
            EstimatorConfig(cfg.epsilon, cfg.T, cfg.scale)
        except ParameterError as exc:
            raise ConfigError(str(exc)) from None
        if truth < cfg.T:
            raise PromiseViolation(
                f"instance has {truth} monochromatic edges, below the promise T={cfg.T}"
            )
    order = read_order(cfg.order_file) if cfg.order_file else None
    seeds = trial_seeds(cfg.base_seed, cfg.trials)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers, initializer=_init_worker,
                                 initargs=(graph, cfg, order)) as pool:
            reports = list(pool.map(_worker, seeds, chunksize=max(1, cfg.trials // (4 * cfg.workers))))
    else:
        reports = [run_trial(graph, cfg, s, order) for s in seeds]
    return aggregate(cfg, instance, seeds, reports)


def _rel_error(estimate: float, truth: int) -> float:
    if truth == 0:
        return 0.0 if estimate == 0 else math.inf
    return abs(estimate - truth) / truth


def aggregate(
    cfg: ExperimentConfig,
    instance: HardInstance,
    seeds: list[int],
    reports: list[EstimatorReport],
) -> TrialStats:
    graph = instance.graph
    truth = instance.true_monochromatic
    m = cfg.m if cfg.m is not None else graph.m
    records = [
        TrialRecord(i, s, r.estimate, truth, _rel_error(r.estimate, truth), r.peak_words,
                    r.decision, r.regime)
        for i, (s, r) in enumerate(zip(seeds, reports))
    ]
    soundness = completeness = None
    if cfg.estimator == "varand_separate":
        decisions = [r.decision for r in records]
        if truth == 0:
            soundness = decisions.count(VALID) / len(decisions)
            success = soundness
        elif truth >= cfg.epsilon * m:
            completeness = decisions.count(FAR) / len(decisions)
            success = completeness
        else:
            success = 1.0  # neither valid nor eps-far: any answer is acceptable
    else:
        ok = sum(1 for r in records if abs(r.estimate - truth) <= cfg.epsilon * truth)
        success = ok / len(records)
    errors = [r.rel_error for r in records]
    max_peak = max(r.peak_words for r in records)
    bound = theoretical_bound(cfg.estimator, graph.n, m, cfg.T, cfg.epsilon)
    return TrialStats(
        config=asdict(cfg),
        truth=truth,
        n=graph.n,
        m=graph.m,
        trials=records,
        success_rate=success,
        mean_rel_error=statistics.fmean(errors),
        median_rel_error=statistics.median(errors),
        max_peak_words=max_peak,
        bound=bound,
        bound_ratio=max_peak / bound,
        soundness_rate=soundness,
        completeness_rate=completeness,
        extra={"construction": instance.construction},
    )


CSV_COLUMNS = ("trial", "seed", "estimate", "truth", "rel_error", "peak_words", "decision", "regime")


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        return repr(x)
    return str(x)


def format_csv(stats: TrialStats) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for r in stats.trials:
        w.writerow([_fmt(getattr(r, c)) for c in CSV_COLUMNS])
    return buf.getvalue()


def summary_path(path: str | Path) -> Path:
    path = Path(path)
    return path.with_name(path.stem + ".summary.json")


def _json_default(x: Any) -> Any:
    if isinstance(x, Path):
        return str(x)
    raise TypeError(f"not JSON serializable: {type(x).__name__}")


def format_summary(stats: TrialStats) -> str:
    data = stats.summary()
    for k, v in data.items():
        if isinstance(v, float) and not math.isfinite(v):
            data[k] = str(v)
    return json.dumps(data, indent=2, sort_keys=True, default=_json_default) + "\n"


def emit_report(stats: TrialStats, path: str | Path) -> tuple[Path, Path]:
    """Write the per-trial CSV and its ``.summary.json`` sidecar."""
    path = Path(path)
    side = summary_path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(format_csv(stats))
        side.write_text(format_summary(stats))
    except OSError as exc:
        raise ConflictStreamError(f"cannot write report to {path}: {exc}") from exc
    return path, side
