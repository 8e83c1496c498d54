#!/usr/bin/env python3
"""
Main entry point for collective-gnn.
Usage:
  python main.py run --synthetic --seed 0        # Baseline vs collective trials
  python main.py expressiveness                  # Certified expressiveness battery
  python main.py ablate --config exp.json        # Trials plus ablations
  python main.py synth --seed 0 --out data/      # Write a synthetic benchmark graph
  python main.py eval --manifest runs/x/manifest.json --trial 0
  python main.py worker                          # Start a Celery worker
"""

import argparse
import json
import os
import sys
from typing import Any, Dict, Optional

# Add current directory to Python path
sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BATTERY_FAILED = 2


def _add_dataset_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("dataset")
    group.add_argument("--dataset-format", choices=["tsv", "cora"], help="Graph files format")
    group.add_argument("--edges", help="Edge list file (tsv)")
    group.add_argument("--features", help="Feature file (tsv)")
    group.add_argument("--labels", help="Label file (tsv)")
    group.add_argument("--content", help="Cora .content file")
    group.add_argument("--cites", help="Cora .cites file")
    group.add_argument("--num-classes", type=int, help="Class count when labels do not reveal it")


def _add_synthetic_flags(parser: argparse.ArgumentParser):
    group = parser.add_argument_group("synthetic benchmark")
    group.add_argument("--n", type=int, help="Node count")
    group.add_argument("--classes", type=int, help="Class count")
    group.add_argument("--communities", type=int, help="Community count (default: classes)")
    group.add_argument("--homophily", type=float, help="p_in / (p_in + p_out), in [0.5, 1]")
    group.add_argument("--avg-degree", type=float, help="Expected average degree")
    group.add_argument("--feature-dim", type=int, help="Feature dimension")
    group.add_argument("--feature-noise", type=float, help="Feature noise scale (omit for uninformative features)")
    group.add_argument("--imbalance", type=float, help="Size ratio between consecutive communities")


def _add_experiment_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="JSON ExperimentConfig; its fields override flags")
    parser.add_argument("--name", help="Run name (output subdirectory)")
    parser.add_argument("--synthetic", action="store_true", help="Use the synthetic homophily benchmark")
    _add_dataset_flags(parser)
    _add_synthetic_flags(parser)
    parser.add_argument("--model", choices=["gcn", "sage"], help="Component GNN")
    parser.add_argument("--trials", type=int, help="Paired trials")
    parser.add_argument("--metric", choices=["accuracy", "balanced_accuracy"])
    parser.add_argument("--seed", type=int, help="Master seed (required for a reproducible run)")
    parser.add_argument("--output-dir", help="Artifact root (default: OUTPUT_DIR)")
    parser.add_argument("--baseline-epochs", type=int)
    parser.add_argument("--baseline-patience", type=int)
    parser.add_argument("--no-collective", action="store_true", help="Skip the collective model (ablations only)")
    parser.add_argument("--ablation", action="append", choices=["uniform", "true_only"], help="Repeatable")

    cl = parser.add_argument_group("collective")
    cl.add_argument("--K", type=int, help="Label samples per step")
    cl.add_argument("--T", type=int, help="Outer iterations")
    cl.add_argument("--J", type=int, help="Steps per iteration")
    cl.add_argument("--scenario", choices=["test_unlabeled", "test_partial"])
    cl.add_argument("--mask-rate", type=float)
    cl.add_argument("--lr", type=float)
    cl.add_argument("--weight-decay", type=float)
    cl.add_argument("--dropout", type=float)
    cl.add_argument("--hidden-dim", type=int)
    cl.add_argument("--clip-norm", type=float)
    cl.add_argument("--redraw", choices=["step", "iteration"])
    cl.add_argument("--patience", type=int, help="Early-stop patience inside an iteration")
    cl.add_argument("--sample-size", type=int, help="GraphSAGE neighbor sample size")

    split = parser.add_argument_group("split")
    split.add_argument("--train-size", type=int)
    split.add_argument("--test-size", type=int)
    split.add_argument("--val-size", type=int)
    split.add_argument("--test-label-rate", type=float)
    split.add_argument("--test-label-mode", choices=["component", "random"])


def _drop_none(values: Dict[str, Any]) -> Dict[str, Any]:
    return {key: value for key, value in values.items() if value is not None}


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _dataset_from_args(args) -> Optional[Dict[str, Any]]:
    dataset = _drop_none({
        "format": args.dataset_format,
        "edge_path": args.edges,
        "feature_path": args.features,
        "label_path": args.labels,
        "content_path": args.content,
        "cites_path": args.cites,
        "num_classes": args.num_classes,
    })
    return dataset or None


def _synthetic_from_args(args) -> Dict[str, Any]:
    return _drop_none({
        "n": args.n,
        "num_classes": args.classes,
        "communities": args.communities,
        "homophily": args.homophily,
        "avg_degree": args.avg_degree,
        "feature_dim": args.feature_dim,
        "feature_noise": args.feature_noise,
        "imbalance": args.imbalance,
    })


def build_experiment_config(args):
    """Flags first, then the --config file on top; a missing seed is drawn and marks the run non-reproducible."""
    import numpy as np
    from src.experiments import ExperimentConfig
    from src.utils.logger import logger

    values: Dict[str, Any] = _drop_none({
        "name": args.name,
        "model": args.model,
        "trials": args.trials,
        "metric": args.metric,
        "seed": args.seed,
        "output_dir": args.output_dir,
        "baseline_epochs": args.baseline_epochs,
        "baseline_patience": args.baseline_patience,
        "ablations": args.ablation,
    })
    if args.no_collective:
        values["collective"] = False
    dataset = _dataset_from_args(args)
    synthetic = _synthetic_from_args(args)
    if dataset:
        values["dataset"] = dataset
    elif args.synthetic or synthetic:
        values["synthetic"] = synthetic
    cl = _drop_none({
        "K": args.K,
        "T": args.T,
        "J": args.J,
        "scenario": args.scenario,
        "mask_rate": args.mask_rate,
        "lr": args.lr,
        "weight_decay": args.weight_decay,
        "dropout_p": args.dropout,
        "hidden_dim": args.hidden_dim,
        "clip_norm": args.clip_norm,
        "redraw": args.redraw,
        "early_stop_patience": args.patience,
        "sample_size": args.sample_size,
    })
    if cl:
        values["cl"] = cl
    split = _drop_none({
        "train_size": args.train_size,
        "test_size": args.test_size,
        "val_size": args.val_size,
        "test_label_rate": args.test_label_rate,
        "test_label_mode": args.test_label_mode,
    })
    if split:
        values["split"] = split

    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            overrides = json.load(handle)
        if "dataset" in overrides or "synthetic" in overrides:
            # the file's data source replaces whichever one the flags picked
            values.pop("dataset", None)
            values.pop("synthetic", None)
        values = _deep_merge(values, overrides)

    reproducible = values.get("seed") is not None
    if not reproducible:
        values["seed"] = int(np.random.SeedSequence().entropy % (2**31))
        logger.warning("No seed given, run is not reproducible", seed=values["seed"])
    return ExperimentConfig.model_validate(values), reproducible


def worker_argv(concurrency: int) -> list:
    """Arguments for ``worker_main``; one consumer per configured queue."""
    from src.infrastructure.celery import QUEUE_CONFIGS

    return [
        'worker',
        '--loglevel=info',
        f'--queues={",".join(QUEUE_CONFIGS)}',
        f'--concurrency={concurrency}',
        '--events',
    ]


def start_worker():
    """Start Celery worker consuming the configured queues."""
    from src.config.config import settings
    from src.infrastructure.celery import QUEUE_CONFIGS, celery_app as celery, check_redis_connection

    print("🚀 Starting collective-gnn worker...")
    print(f"📋 Queues: {', '.join(QUEUE_CONFIGS)}")
    print(f"🔧 Concurrency: {settings.WORKER_CONCURRENCY}")
    print(f"🔌 Broker: {check_redis_connection()}")
    print()

    print("📋 Registered tasks:")
    for task_name in sorted(celery.tasks.keys()):
        if not task_name.startswith('celery.'):
            print(f"  ✅ {task_name}")
    print()

    celery.worker_main(worker_argv(settings.WORKER_CONCURRENCY))
    return EXIT_OK


def cmd_run_verb(args) -> int:
    from src.experiments import cmd_ablate, cmd_run

    config, reproducible = build_experiment_config(args)
    if args.command == "ablate":
        report = cmd_ablate(config, ablations=config.ablations or None, reproducible=reproducible)
    else:
        report = cmd_run(config, reproducible=reproducible)
    print(report.model_dump_json(indent=2, include={"name", "baseline", "collective", "ablations"}))
    return EXIT_OK


def cmd_expressiveness_verb(args) -> int:
    from src.experiments import cmd_expressiveness
    from src.infrastructure.storage import ArtifactStore

    store = ArtifactStore(args.output_dir) if args.output_dir else None
    report = cmd_expressiveness(num_seeds=args.seeds, include_benchmark=args.benchmark, store=store)
    print(report.model_dump_json(indent=2))
    return EXIT_OK if report.passed else EXIT_BATTERY_FAILED


def cmd_synth_verb(args) -> int:
    from src.experiments import SyntheticSpec, cmd_synth

    spec = SyntheticSpec.model_validate(_synthetic_from_args(args))
    paths = cmd_synth(spec, args.seed, args.out)
    print(json.dumps(paths, indent=2))
    return EXIT_OK


def cmd_eval_verb(args) -> int:
    from src.experiments import DatasetSpec, cmd_eval

    dataset = _dataset_from_args(args)
    report = cmd_eval(
        args.manifest,
        args.trial,
        variant=args.variant,
        dataset=DatasetSpec.model_validate(dataset) if dataset else None,
        output=args.output,
    )
    print(report.model_dump_json(indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Collective learning for GNN node classification",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  python main.py run --synthetic --seed 0 --trials 5
  python main.py ablate --synthetic --seed 0 --ablation uniform
  python main.py expressiveness --seeds 20
  python main.py synth --seed 0 --out data/homophily
  python main.py eval --manifest runs/experiment/manifest.json --trial 0
  python main.py worker
        """
    )
    commands = parser.add_subparsers(dest="command", required=True)

    for verb, help_text in (("run", "Paired baseline / collective trials"), ("ablate", "Trials plus ablations")):
        _add_experiment_flags(commands.add_parser(verb, help=help_text))

    expressiveness = commands.add_parser("expressiveness", help="Run the expressiveness battery")
    expressiveness.add_argument("--seeds", type=int, default=20, help="Seeds for randomized checks")
    expressiveness.add_argument("--benchmark", action="store_true", help="Include the homophily benchmark")
    expressiveness.add_argument("--output-dir", help="Write expressiveness.json here")

    synth = commands.add_parser("synth", help="Generate a synthetic benchmark graph")
    _add_synthetic_flags(synth)
    synth.add_argument("--seed", type=int, required=True)
    synth.add_argument("--out", required=True, help="Output directory")

    evaluate = commands.add_parser("eval", help="Re-run inference from a run manifest")
    evaluate.add_argument("--manifest", required=True)
    evaluate.add_argument("--trial", type=int, default=0)
    evaluate.add_argument("--variant", default="collective")
    evaluate.add_argument("--output", help="Prediction file (default: inside the run directory)")
    _add_dataset_flags(evaluate)

    commands.add_parser("worker", help="Start a Celery worker")
    return parser


VERBS = {
    "run": cmd_run_verb,
    "ablate": cmd_run_verb,
    "expressiveness": cmd_expressiveness_verb,
    "synth": cmd_synth_verb,
    "eval": cmd_eval_verb,
    "worker": lambda args: start_worker(),
}


def main(argv=None) -> int:
    """Main entry point with argument parsing; returns the process exit code."""
    args = build_parser().parse_args(argv)

    from pydantic import ValidationError
    from src.ai.common import CollectiveGNNError
    from src.utils.logger import logger

    try:
        return VERBS[args.command](args)
    except (CollectiveGNNError, OSError, ValidationError, json.JSONDecodeError) as e:
        logger.error(
            "Command failed",
            command=args.command,
            error_type=type(e).__name__,
            error_message=str(e),
        )
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
