"""Command-line entry point ``cier``.

Subcommands:

* ``run``: train one or more seeds and write scores, effect snapshots, metrics and a plot
* ``segment``: TICC segmentation of an episode CSV into a labels JSON
* ``discover``: causal discovery on a factor encoding CSV
* ``replay-sim``: sampling conformance run on a buffer snapshot
* ``report``: metrics table and score plot for existing ``scores.csv`` files

Exit codes: 0 success, 2 usage or configuration error, 3 data error, 4 numerical failure.
"""

import argparse
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from .core.config import CIERConfig, load_config_from_env, load_default_config
from .core.exceptions import CIERError, ConfigurationError, DataError, NumericalError
from .utils.logging import get_logger, setup_logger

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NUMERICAL = 4

logger = get_logger(__name__)


# -- configuration ----------------------------------------------------------

def load_config(args: argparse.Namespace) -> CIERConfig:
    """File (or defaults), then ``CIER_*`` variables, then command-line flags."""
    config = CIERConfig.from_file(args.config) if args.config else load_default_config()
    config = load_config_from_env(config)
    if args.log_level is None and config.run.enable_logging:
        setup_logger(level=config.run.log_level, log_file=args.log_file)
    overrides: Dict[str, Any] = {}
    if args.seed is not None:
        overrides.update({"run.seeds": [args.seed], "ticc.seed": args.seed, "tscf.seed": args.seed,
                          "causal.seed": args.seed, "replay.seed": args.seed, "agent.seed": args.seed})
    for flag, key in getattr(args, "overrides", {}).items():
        value = getattr(args, flag, None)
        if value is not None:
            overrides[key] = value
    return config.update(**overrides) if overrides else config


# -- run --------------------------------------------------------------------

def _train_seed(config_dict: Dict[str, Any], seed: int, output_dir: str) -> Dict[str, Any]:
    from .rl.trainer import train

    config = CIERConfig.from_dict(config_dict)
    return train(config, seed=seed, output_dir=output_dir).to_dict()


def cmd_run(args: argparse.Namespace) -> int:
    from .evaluators.metrics import compute_metrics
    from .models.metrics import RunManifest
    from .utils.serialization import save_json
    from .utils.visualization import metrics_table, write_score_plot

    config = load_config(args)
    seeds = list(args.seeds) if args.seeds else config.run.seeds
    out = Path(args.output or config.run.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    start = time.perf_counter()

    seed_dirs = {seed: str(out / f"seed_{seed}") for seed in seeds}
    config_dict = config.to_dict()
    workers = min(config.run.workers, len(seeds))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = {s: pool.submit(_train_seed, config_dict, s, seed_dirs[s]) for s in seeds}
            runs = {s: f.result() for s, f in futures.items()}
    else:
        runs = {s: _train_seed(config_dict, s, seed_dirs[s]) for s in seeds}

    label = f"{config.agent.algorithm}-{config.replay.mode}"
    metrics = {f"{label}/seed_{s}": compute_metrics(r["scores"]) for s, r in runs.items()}
    save_json({k: m.to_dict() for k, m in metrics.items()}, str(out / "metrics.json"))
    write_score_plot({f"seed_{s}": r["scores"] for s, r in runs.items()}, out / "plot.svg",
                     title=f"{label} score per episode")

    outputs = {"metrics": str(out / "metrics.json"), "plot": str(out / "plot.svg")}
    outputs.update({f"seed_{s}": d for s, d in seed_dirs.items()})
    manifest = RunManifest(config=config_dict, seeds=seeds, outputs=outputs,
                           wall_clock=time.perf_counter() - start)
    manifest.save_to_file(str(out / "manifest.json"))
    print(metrics_table(metrics))
    return EXIT_OK


# -- segment ----------------------------------------------------------------

def cmd_segment(args: argparse.Namespace) -> int:
    from .core.pipeline import CausalAnalysisPipeline
    from .timeseries.series import build_series
    from .timeseries.ticc import debug_dump
    from .utils.episode_io import read_episodes_csv
    from .utils.serialization import save_json, to_jsonable

    config = load_config(args)
    pipeline = CausalAnalysisPipeline(config)
    episodes = read_episodes_csv(args.episodes)
    if args.episode is not None:
        episodes = [e for e in episodes if e[0].episode_id == args.episode]
        if not episodes:
            raise DataError(f"Episode {args.episode} not found in {args.episodes}")

    labels, dumps = {}, {}
    for transitions in episodes:
        series = build_series(transitions)
        segmentation, models = pipeline.segment_series(series, k=args.k)
        labels[str(series.episode_id)] = segmentation.to_dict()
        dumps[str(series.episode_id)] = debug_dump(models, segmentation)

    if args.debug_dump:
        save_json(dumps, args.debug_dump)
    if args.output:
        save_json(labels, args.output)
    else:
        print(json.dumps(to_jsonable(labels), indent=2))
    return EXIT_OK


# -- discover ---------------------------------------------------------------

def cmd_discover(args: argparse.Namespace) -> int:
    from .causal.discovery import GfciLite
    from .causal.effects import path_strengths
    from .causal.time_correction import TimeCorrector
    from .models.factors import OccurrenceMap
    from .utils.episode_io import read_encodings_csv
    from .utils.serialization import load_json, save_json
    from .utils.visualization import explain_effects, pag_to_dot, pag_to_text

    config = load_config(args)
    cfg = config.causal
    data = read_encodings_csv(args.encodings)
    if args.occurrences:
        occurrences = OccurrenceMap.from_dict(load_json(args.occurrences))
    else:
        logger.warning("No --occurrences given: ambiguous edges are oriented by factor id, not by time")
        occurrences = OccurrenceMap()

    discovery = GfciLite(alpha=cfg.alpha, seed=cfg.seed, max_sepset_size=cfg.max_sepset_size,
                         restarts=cfg.restarts, min_samples_per_node=cfg.min_samples_per_node).fit(data)
    correction = TimeCorrector(occurrences).correct(discovery.pag)
    table = path_strengths(correction.pag, data, cfg.path_aggregation)

    print("PAG:")
    print(pag_to_text(discovery.pag) or "(no edges)")
    print("")
    print("Time-corrected DAG:")
    print(pag_to_text(correction.pag) or "(no edges)")
    if args.explain:
        print("")
        print(explain_effects(table, correction.pag))

    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        (out / "pag.dot").write_text(pag_to_dot(discovery.pag), encoding="utf-8")
        (out / "dag.dot").write_text(pag_to_dot(correction.pag, name="DAG"), encoding="utf-8")
        save_json(table.to_dict(), str(out / "effects.json"))
        save_json([d.to_dict() for d in correction.decisions], str(out / "orientation.json"))
    return EXIT_OK


# -- replay-sim -------------------------------------------------------------

def cmd_replay_sim(args: argparse.Namespace) -> int:
    from .replay.conformance import buffer_from_snapshot, sampling_conformance
    from .utils.serialization import read_json_lines, save_json

    config = load_config(args)
    records = read_json_lines(args.snapshot)
    buffer = buffer_from_snapshot(records, mode=args.mode or config.replay.mode, epoch=args.epoch,
                                  base=config.replay, schedule=config.curriculum, seed=config.replay.seed)
    report = sampling_conformance(buffer, args.draws, args.batch)
    summary = {k: v for k, v in report.to_dict().items() if k not in ("expected", "frequencies")}
    print(json.dumps(summary, indent=2))
    if args.output:
        save_json(report.to_dict(), args.output)
    return EXIT_OK


# -- report -----------------------------------------------------------------

def cmd_report(args: argparse.Namespace) -> int:
    from .evaluators.metrics import compare_runs, compute_metrics
    from .utils.episode_io import read_scores_csv
    from .utils.serialization import save_json
    from .utils.visualization import label_series, metrics_table, write_score_plot

    paths = list(args.scores)
    series = label_series(paths, [read_scores_csv(p) for p in paths])
    metrics = {name: compute_metrics(values) for name, values in series.items()}
    print(metrics_table(metrics))

    comparison = None
    if args.baseline or args.treatment:
        if not (args.baseline and args.treatment):
            raise ConfigurationError("--baseline and --treatment must be given together")
        comparison = compare_runs([read_scores_csv(p) for p in args.baseline],
                                  [read_scores_csv(p) for p in args.treatment])
        print("")
        print(f"Paired seeds: {comparison.seeds}")
        print(f"Median AS: baseline {comparison.baseline_medians['AS']:.3f}, "
              f"treatment {comparison.treatment_medians['AS']:.3f}")
        print(f"Wilcoxon (AS, treatment > baseline): W+={comparison.score_test.statistic:.1f}, "
              f"p={comparison.score_test.p_value:.4g}")
        print(f"Wilcoxon (episodes to baseline AS): W+={comparison.threshold_test.statistic:.1f}, "
              f"p={comparison.threshold_test.p_value:.4g}")

    if args.output:
        out = Path(args.output)
        out.mkdir(parents=True, exist_ok=True)
        save_json({k: m.to_dict() for k, m in metrics.items()}, str(out / "metrics.json"))
        write_score_plot(series, out / "plot.svg")
        if comparison is not None:
            save_json(comparison.to_dict(), str(out / "comparison.json"))
    return EXIT_OK


# -- parser -----------------------------------------------------------------

def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", "-c", help="Configuration file (JSON or YAML)")
    parser.add_argument("--seed", type=int, help="Seed for every random component")
    parser.add_argument("--log-level", default=None,
                        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], help="Logging level")
    parser.add_argument("--log-file", help="Also log to this file")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cier", description="Causal inference experience replay")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Train agents and write run artifacts")
    _common(run)
    run.add_argument("--mode", choices=["uniform", "per", "cier", "ciper"], help="Replay mode")
    run.add_argument("--algorithm", choices=["ddpg", "td3"], help="Agent algorithm")
    run.add_argument("--env", choices=["planted_factor", "lane_world"], help="Environment")
    run.add_argument("--episodes", type=int, help="Episodes per seed")
    run.add_argument("--seeds", type=int, nargs="+", help="Seeds to run")
    run.add_argument("--workers", type=int, help="Parallel seed workers")
    run.add_argument("--async-analysis", action="store_true", default=None,
                     help="Run causal analysis on a worker thread")
    run.add_argument("--output", "-o", help="Output directory")
    run.set_defaults(handler=cmd_run, overrides={
        "mode": "replay.mode", "algorithm": "agent.algorithm", "env": "env.name",
        "episodes": "run.episodes", "workers": "run.workers", "async_analysis": "run.async_analysis",
    })

    segment = sub.add_parser("segment", help="TICC segmentation of an episode CSV")
    _common(segment)
    segment.add_argument("episodes", help="Episode CSV (episode,step,reward,done,a0..,s0..)")
    segment.add_argument("--episode", type=int, help="Only segment this episode id")
    segment.add_argument("--k", type=int, help="Cluster count (adaptive when omitted)")
    segment.add_argument("--window", type=int, help="Window length w")
    segment.add_argument("--beta", type=float, help="Switching penalty")
    segment.add_argument("--no-normalize", dest="normalize", action="store_false", default=None,
                         help="Segment the raw actions without z-normalization")
    segment.add_argument("--debug-dump", help="Write labels, precision matrices and objective traces here")
    segment.add_argument("--output", "-o", help="Labels JSON path (stdout when omitted)")
    segment.set_defaults(handler=cmd_segment, overrides={
        "window": "ticc.window", "beta": "ticc.beta", "normalize": "ticc.normalize",
    })

    discover = sub.add_parser("discover", help="Causal discovery on a factor encoding CSV")
    _common(discover)
    discover.add_argument("encodings", help="Encoding CSV (episode,<factors>,outcome)")
    discover.add_argument("--occurrences", help="Occurrence map JSON for time correction")
    discover.add_argument("--alpha", type=float, help="Significance level of the CI tests")
    discover.add_argument("--aggregation", choices=["sum", "product"], help="Path aggregation")
    discover.add_argument("--explain", action="store_true", help="Print a factor-level explanation")
    discover.add_argument("--output", "-o", help="Directory for pag.dot, dag.dot and effects.json")
    discover.set_defaults(handler=cmd_discover, overrides={
        "alpha": "causal.alpha", "aggregation": "causal.path_aggregation",
    })

    replay = sub.add_parser("replay-sim", help="Sampling conformance run on a buffer snapshot")
    _common(replay)
    replay.add_argument("snapshot", help="Buffer snapshot JSON lines (episode, step, c, td)")
    replay.add_argument("--mode", choices=["uniform", "per", "cier", "ciper"], help="Replay mode")
    replay.add_argument("--epoch", type=float, default=0.0, help="Curriculum epoch epsilon_c")
    replay.add_argument("--draws", type=int, default=1_000_000, help="Total sampled indices")
    replay.add_argument("--batch", type=int, help="Indices per draw")
    replay.add_argument("--output", "-o", help="Full report JSON path")
    replay.set_defaults(handler=cmd_replay_sim, overrides={})

    report = sub.add_parser("report", help="Metrics table and plot for score files")
    _common(report)
    report.add_argument("scores", nargs="+", help="scores.csv files, one per run")
    report.add_argument("--baseline", nargs="+", help="Baseline scores.csv files, one per seed")
    report.add_argument("--treatment", nargs="+", help="Treatment scores.csv files, paired with --baseline")
    report.add_argument("--output", "-o", help="Directory for metrics.json and plot.svg")
    report.set_defaults(handler=cmd_report, overrides={})
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    setup_logger(level=args.log_level or "WARNING", log_file=args.log_file)
    try:
        return args.handler(args)
    except ConfigurationError as e:
        logger.error("Configuration error: %s", e)
        print(f"cier: configuration error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"cier: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as e:
        print(f"cier: invalid input: {e}", file=sys.stderr)
        return EXIT_DATA
    except DataError as e:
        print(f"cier: data error: {e}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as e:
        print(f"cier: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CIERError as e:
        print(f"cier: {e}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
