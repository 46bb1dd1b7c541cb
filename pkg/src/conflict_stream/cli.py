"""Command line entry point: gen / run / verify / sweep.

Exit codes: 0 ok, 1 other library error, 2 bad configuration, 3 promise violation.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import logging
import sys
from pathlib import Path
from typing import Any

from .errors import ConfigError, ConflictStreamError, ParameterError, PromiseViolation
from .graph_core import exact_monochromatic_count
from .graph_io import read_graph, write_graph
from .harness import (
    GENERATORS,
    ExperimentConfig,
    build_instance,
    emit_report,
    format_summary,
    run_experiment,
)

log = logging.getLogger("conflict_stream")

EXIT_OK, EXIT_ERROR, EXIT_CONFIG, EXIT_PROMISE = 0, 1, 2, 3

# generator name -> (cli dest, kwarg) pairs it accepts
GEN_PARAMS = {
    "planted": [("n", "n"), ("avg_degree", "avg_degree"), ("colors", "color_count"),
                ("t", "target_monochromatic"), ("seed", "seed")],
    "erdos-renyi": [("n", "n"), ("p", "p"), ("colors", "color_count"), ("seed", "seed")],
    "index-va": [("x_bits", "X"), ("j", "j"), ("n", "n"), ("t", "T"), ("m", "m")],
    "index-vadeg": [("x_bits", "X"), ("j", "j"), ("n", "n"), ("m", "m"), ("t", "T")],
    "index-sep": [("x_bits", "X"), ("j", "j"), ("k", "k"), ("variant", "variant")],
    "cliques": [("matrix", "M"), ("t", "T")],
    "valid": [("n", "n"), ("m", "m"), ("colors", "color_count"), ("seed", "seed")],
    "far-matching": [("n", "n"), ("m", "m"), ("epsilon", "epsilon"), ("colors", "color_count"),
                     ("seed", "seed")],
    "far-star": [("n", "n"), ("m", "m"), ("epsilon", "epsilon"), ("colors", "color_count"),
                 ("seed", "seed")],
}


def _load_json(path: str | None) -> dict[str, Any]:
    if not path:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return data


def _gen_spec(args: argparse.Namespace, base: dict[str, Any]) -> dict[str, Any]:
    spec = dict(base)
    name = args.construction or spec.get("construction")
    if name not in GEN_PARAMS:
        raise ConfigError(f"--construction must be one of {sorted(GENERATORS)}")
    spec["construction"] = name
    for dest, kw in GEN_PARAMS[name]:
        val = getattr(args, dest, None)
        if val is None:
            continue
        if dest == "matrix":
            val = json.loads(Path(val).read_text()) if Path(val).is_file() else json.loads(val)
        spec[kw] = val
    return spec


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _gen_spec(args, _load_json(args.config))
    inst = build_instance(spec)
    meta = {
        "construction": inst.construction,
        "parameters": inst.parameters,
        "n": inst.graph.n,
        "m": inst.graph.m,
        "true_monochromatic": inst.true_monochromatic,
    }
    if args.out:
        write_graph(inst.graph, args.out)
        Path(args.out).with_suffix(".json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    print(json.dumps(meta, sort_keys=True))
    return EXIT_OK


_RUN_FLAGS = {
    "model": "model", "estimator": "estimator", "epsilon": "epsilon", "t": "T",
    "scale": "scale", "trials": "trials", "seed": "base_seed", "out": "out",
    "m": "m", "order": "order_file", "workers": "workers",
}


def _experiment_config(args: argparse.Namespace) -> ExperimentConfig:
    data = _load_json(args.config)
    for dest, key in _RUN_FLAGS.items():
        val = getattr(args, dest, None)
        if val is not None:
            data[key] = val
    if args.graph:
        data["instance"] = args.graph
    elif args.gen_inline:
        try:
            data["instance"] = json.loads(args.gen_inline)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--gen-inline is not valid JSON: {exc}") from None
    for key in ("instance", "model"):
        if key not in data:
            raise ConfigError(f"missing required setting {key!r}")
    return ExperimentConfig.from_dict(data)


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _experiment_config(args)
    stats = run_experiment(cfg)
    if cfg.out:
        emit_report(stats, cfg.out)
    sys.stdout.write(format_summary(stats))
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    g = read_graph(args.graph)
    truth = exact_monochromatic_count(g)
    print(json.dumps({"n": g.n, "m": g.m, "color_count": g.color_count,
                      "true_monochromatic": truth}, sort_keys=True))
    if args.expect is not None and args.expect != truth:
        log.error("expected %d monochromatic edges, found %d", args.expect, truth)
        return EXIT_ERROR
    return EXIT_OK


SWEEP_COLUMNS = ("n", "T", "epsilon", "m", "truth", "success_rate", "mean_rel_error",
                 "max_peak_words", "bound", "bound_ratio")


def cmd_sweep(args: argparse.Namespace) -> int:
    base = _load_json(args.config)
    model = args.model or base.get("model")
    if model is None:
        raise ConfigError("sweep needs --model")
    out_dir = Path(args.out or base.get("out", "sweep_out"))
    rows = []
    for n, T, eps in itertools.product(args.n, args.t, args.epsilon):
        spec = {"construction": "planted", "n": n, "avg_degree": args.avg_degree,
                "color_count": args.colors, "target_monochromatic": T, "seed": args.seed}
        cfg = ExperimentConfig(
            instance=spec, model=model, estimator=args.estimator or base.get("estimator"),
            epsilon=eps, T=T, scale=args.scale if args.scale is not None else base.get("scale", 1.0),
            trials=args.trials, base_seed=args.seed, workers=args.workers,
            out=str(out_dir / f"n{n}_T{T}_eps{eps}.csv"),
        )
        stats = run_experiment(cfg)
        emit_report(stats, cfg.out)
        rows.append([n, T, eps, stats.m, stats.truth, stats.success_rate, stats.mean_rel_error,
                     stats.max_peak_words, stats.bound, stats.bound_ratio])
        log.info("n=%d T=%d eps=%g success=%.3f peak=%d", n, T, eps, stats.success_rate,
                 stats.max_peak_words)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "sweep.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        w.writerows([[repr(x) if isinstance(x, float) else x for x in r] for r in rows])
    print(out_dir / "sweep.csv")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="conflict-stream",
                                description="Streaming conflict estimation experiments")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="build an instance and write it as a graph file")
    g.add_argument("--config")
    g.add_argument("--construction", choices=sorted(GENERATORS))
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--t", type=int, help="promise T / planted conflict count")
    g.add_argument("--k", type=int)
    g.add_argument("--x-bits", dest="x_bits", help="INDEX bit string, e.g. 0110")
    g.add_argument("--j", type=int, help="0-based INDEX position")
    g.add_argument("--p", type=float)
    g.add_argument("--avg-degree", dest="avg_degree", type=float)
    g.add_argument("--colors", type=int)
    g.add_argument("--epsilon", type=float)
    g.add_argument("--variant", choices=("va", "vadeg"))
    g.add_argument("--matrix", help="0/1 matrix as JSON text or a JSON file")
    g.add_argument("--seed", type=int)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("run", help="run seeded estimator trials")
    r.add_argument("--config")
    src = r.add_mutually_exclusive_group()
    src.add_argument("--graph")
    src.add_argument("--gen-inline", dest="gen_inline",
                     help='generator spec as JSON, e.g. {"construction": "planted", ...}')
    r.add_argument("--model")
    r.add_argument("--estimator")
    r.add_argument("--epsilon", type=float)
    r.add_argument("--t", type=int)
    r.add_argument("--scale", type=float)
    r.add_argument("--m", type=int)
    r.add_argument("--trials", type=int)
    r.add_argument("--seed", type=int)
    r.add_argument("--order", help="file with a fixed arrival order")
    r.add_argument("--workers", type=int)
    r.add_argument("--out")
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="recompute the true conflict count of a graph file")
    v.add_argument("graph")
    v.add_argument("--expect", type=int)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("sweep", help="cartesian sweep over n, T and epsilon on planted instances")
    s.add_argument("--config")
    s.add_argument("--model")
    s.add_argument("--estimator")
    s.add_argument("--n", type=int, nargs="+", required=True)
    s.add_argument("--t", type=int, nargs="+", required=True)
    s.add_argument("--epsilon", type=float, nargs="+", default=[0.3])
    s.add_argument("--scale", type=float)
    s.add_argument("--avg-degree", dest="avg_degree", type=float, default=10.0)
    s.add_argument("--colors", type=int, default=8)
    s.add_argument("--trials", type=int, default=10)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_sweep)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except PromiseViolation as exc:
        log.error("promise violated: %s", exc)
        return EXIT_PROMISE
    except (ConfigError, ParameterError) as exc:
        log.error("configuration error: %s", exc)
        return EXIT_CONFIG
    except ConflictStreamError as exc:
        log.error("%s", exc)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
