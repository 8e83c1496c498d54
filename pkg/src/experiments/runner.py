"""
Paired baseline / collective trials and their aggregation into a report.
"""

from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.ai.collective import (
    CollectiveHistory,
    CollectiveTrainingResult,
    InferenceResult,
    LabelSource,
    Scenario,
    cl_infer,
    cl_train,
    format_predictions,
)
from src.ai.common import ConfigurationError, DegenerateTestError
from src.ai.common.metrics import METRICS
from src.ai.gnn import create_model, eval_probs, predict_classes, train_baseline
from src.ai.graph import Graph, SplitSpec, make_split, save_graph
from src.config.config import settings
from src.infrastructure.storage import ArtifactStore
from src.utils.logger import logger
from .config import DatasetSpec, ExperimentConfig, SyntheticSpec
from .reports import (
    ComparisonSummary,
    EvaluationReport,
    IterationSummary,
    RunManifest,
    TrialArtifacts,
    TrialRecord,
    TrialReport,
    TrialSeeds,
)
from .stats import mean_and_stderr, paired_t_test

TRIAL_SEED_STRIDE = 1000

VARIANT_SOURCES: Dict[str, LabelSource] = {
    "collective": LabelSource.PREDICTED,
    "uniform": LabelSource.UNIFORM,
    "true_only": LabelSource.TRUE_ONLY,
}


def derive_seeds(master_seed: int, trial: int) -> TrialSeeds:
    """Per-trial seeds at fixed offsets from the master seed; they do not depend on the model choice."""
    base = master_seed + TRIAL_SEED_STRIDE * (trial + 1)
    return TrialSeeds(split=base + 1, baseline=base + 2, collective=base + 3, inference=base + 4)


def load_experiment_graph(config: ExperimentConfig) -> Graph:
    if config.synthetic is not None:
        return config.synthetic.generate(np.random.default_rng(config.seed))
    return config.dataset.load()


def trial_split(config: ExperimentConfig, g: Graph, seeds: TrialSeeds) -> SplitSpec:
    return make_split(
        g,
        config.split.train_size,
        config.split.test_size,
        np.random.default_rng(seeds.split),
        val_size=config.split.val_size,
        test_label_rate=config.test_label_rate,
        test_label_mode=config.split.test_label_mode,
    )


def observed_labels(split: SplitSpec) -> List[int]:
    """Labels shown at inference: the training labels plus the observed test labels."""
    return sorted(set(split.train_labeled) | set(split.test_labeled))


def _score(config: ExperimentConfig, g: Graph, preds: np.ndarray, nodes: Sequence[int]) -> float:
    return METRICS[config.metric](preds, g.labels, nodes)


def _iteration_summaries(result: CollectiveTrainingResult) -> List[IterationSummary]:
    return [
        IterationSummary(
            iteration=record.iteration,
            steps=len(record.steps),
            best_step=record.best_step,
            best_val_accuracy=record.best_val_accuracy,
            final_loss=record.steps[-1].loss if record.steps else None,
        )
        for record in result.history.iterations
    ]


def execute_trial(config: ExperimentConfig, trial: int, store: Optional[ArtifactStore] = None) -> TrialRecord:
    """
    Run one paired trial: a fresh split, the baseline model, and every
    collective variant trained and evaluated with the same seeds.

    Args:
        config: Experiment configuration (its seed must be set)
        trial: Trial index
        store: Where to write the split, checkpoints and predictions (optional)

    Returns:
        TrialRecord with the metrics on ``split.test_eval``
    """
    if config.seed is None:
        raise ConfigurationError("a master seed is required to run trials")
    seeds = derive_seeds(config.seed, trial)
    g = load_experiment_graph(config)
    split = trial_split(config, g, seeds)
    cfg = config.cl.model_copy(update={"seed": seeds.collective})
    prefix = f"trial_{trial:02d}"

    baseline_rng = np.random.default_rng(seeds.baseline)
    baseline = create_model(
        config.model,
        g.num_features,
        g.num_classes,
        baseline_rng,
        hidden_dim=cfg.hidden_dim,
        dropout_p=cfg.dropout_p,
        sample_size=cfg.sample_size,
    )
    baseline, baseline_history = train_baseline(
        baseline,
        g,
        split,
        config.baseline_epochs,
        cfg.lr,
        cfg.weight_decay,
        config.baseline_patience,
        baseline_rng,
        clip_norm=cfg.clip_norm,
    )
    baseline_metric = _score(config, g, predict_classes(eval_probs(baseline, g, g.features)), split.test_eval)

    variants = (["collective"] if config.collective else []) + list(config.ablations)
    outcomes: Dict[str, Tuple[CollectiveTrainingResult, InferenceResult]] = {}
    for variant in variants:
        result = cl_train(
            config.model, g, split, cfg, np.random.default_rng(seeds.collective), label_source=VARIANT_SOURCES[variant]
        )
        inference = cl_infer(
            result, g, split, cfg, np.random.default_rng(seeds.inference), observed=observed_labels(split)
        )
        outcomes[variant] = (result, inference)

    artifacts = None
    if store is not None:
        artifacts = TrialArtifacts(
            trial=trial,
            split=store.save_split(split, f"{prefix}/split.json"),
            baseline_checkpoint=store.save_checkpoint(baseline, f"{prefix}/baseline.json"),
        )
        for variant, (result, inference) in outcomes.items():
            artifacts.checkpoints[variant] = [
                store.save_checkpoint(model, f"{prefix}/{variant}/iteration_{t:02d}.json")
                for t, model in enumerate(result.models, start=1)
            ]
            artifacts.predictions[variant] = store.write_lines(
                format_predictions(inference, split.test_eval), f"{prefix}/predictions/{variant}.tsv"
            )

    collective_metric, curve, summaries = baseline_metric, [], []
    if "collective" in outcomes:
        result, inference = outcomes["collective"]
        collective_metric = _score(config, g, inference.predictions, split.test_eval)
        curve = [_score(config, g, predict_classes(p), split.test_eval) for p in inference.iteration_probs]
        summaries = _iteration_summaries(result)

    record = TrialRecord(
        trial=trial,
        seeds=seeds,
        split_sizes={
            "train_labeled": len(split.train_labeled),
            "validation": len(split.validation),
            "test_eval": len(split.test_eval),
            "test_labeled": len(split.test_labeled),
        },
        baseline_metric=baseline_metric,
        baseline_best_epoch=baseline_history.best_epoch,
        collective_metric=collective_metric,
        improvement=collective_metric - baseline_metric,
        collective_curve=curve,
        collective_history=summaries,
        ablation_metrics={
            variant: _score(config, g, outcomes[variant][1].predictions, split.test_eval)
            for variant in config.ablations
        },
        artifacts=artifacts,
    )
    logger.info(
        "Trial finished",
        trial=trial,
        baseline=record.baseline_metric,
        collective=record.collective_metric,
        improvement=record.improvement,
        ablations=record.ablation_metrics,
    )
    return record


def summarize(variant: str, values: Sequence[float], baseline_values: Sequence[float]) -> ComparisonSummary:
    """Per-trial improvements over the baseline, their mean and the paired t-test."""
    improvements = [float(v - b) for v, b in zip(values, baseline_values)]
    t_test, note = None, None
    if len(values) < 2:
        note = "paired t-test needs at least two trials"
    else:
        try:
            t_test = paired_t_test(values, baseline_values)
        except DegenerateTestError as e:
            note = str(e)
    return ComparisonSummary(
        variant=variant,
        metric=mean_and_stderr(values),
        improvement=mean_and_stderr(improvements),
        improvements=improvements,
        t_test=t_test,
        note=note,
    )


def build_report(config: ExperimentConfig, records: List[TrialRecord], reproducible: bool) -> TrialReport:
    records = sorted(records, key=lambda r: r.trial)
    baseline_values = [r.baseline_metric for r in records]
    return TrialReport(
        name=config.name,
        reproducible=reproducible,
        config=config,
        metric=config.metric,
        trials=records,
        baseline=mean_and_stderr(baseline_values),
        collective=summarize("collective", [r.collective_metric for r in records], baseline_values),
        ablations={
            variant: summarize(variant, [r.ablation_metrics[variant] for r in records], baseline_values)
            for variant in config.ablations
        },
    )


def default_store(config: ExperimentConfig) -> ArtifactStore:
    return ArtifactStore(config.resolved_output_dir(settings.OUTPUT_DIR) / config.name)


def cmd_run(
    config: ExperimentConfig,
    reproducible: bool = True,
    store: Optional[ArtifactStore] = None,
) -> TrialReport:
    """
    Dispatch every trial as a task, assemble the report in trial order and
    write it together with the run manifest.
    """
    from src.infrastructure.celery import celery_app  # noqa: F401  binds the configured app
    from src.tasks.experiments import run_trial

    store = store or default_store(config)
    logger.info("Run started", name=config.name, trials=config.trials, model=config.model.value, seed=config.seed)
    payload = config.model_dump_json()
    pending = [run_trial.apply_async(args=[payload, trial, str(store.root)]) for trial in range(config.trials)]
    records = [TrialRecord.model_validate(task.get(timeout=settings.TRIAL_TIME_LIMIT)) for task in pending]

    report = build_report(config, records, reproducible)
    report_path = store.save_model(report, "report.json")
    variants = (["collective"] if config.collective else []) + list(config.ablations)
    store.save_model(
        RunManifest(
            name=config.name,
            config=config,
            report=report_path,
            label_sources={variant: VARIANT_SOURCES[variant] for variant in variants},
            trials=[record.artifacts for record in report.trials if record.artifacts is not None],
        ),
        "manifest.json",
    )
    summary = report.collective
    logger.info(
        "Run finished",
        name=config.name,
        baseline=report.baseline.mean,
        collective=summary.metric.mean,
        improvement=summary.improvement.mean,
        p_value=summary.t_test.p_value if summary.t_test else None,
    )
    return report


def cmd_ablate(
    config: ExperimentConfig,
    ablations: Optional[Sequence[str]] = None,
    reproducible: bool = True,
    store: Optional[ArtifactStore] = None,
) -> TrialReport:
    """Run the collective comparison together with the ablations applicable to the scenario."""
    if ablations is None:
        ablations = ["uniform"] + (["true_only"] if config.scenario == Scenario.TEST_PARTIAL else [])
    updated = ExperimentConfig.model_validate(
        {**config.model_dump(), "collective": True, "ablations": list(ablations)}
    )
    return cmd_run(updated, reproducible=reproducible, store=store)


def cmd_synth(spec: SyntheticSpec, seed: int, out_dir: Union[str, Path]) -> Dict[str, str]:
    """Generate a benchmark graph and write it in the three-file text format."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    g = spec.generate(np.random.default_rng(seed))
    paths = {
        "edge_path": str(out_dir / "edges.tsv"),
        "feature_path": str(out_dir / "features.tsv"),
        "label_path": str(out_dir / "labels.tsv"),
    }
    save_graph(g, paths["edge_path"], paths["feature_path"], paths["label_path"])
    return paths


def cmd_eval(
    manifest_path: Union[str, Path],
    trial: int,
    variant: str = "collective",
    dataset: Optional[DatasetSpec] = None,
    output: Optional[Union[str, Path]] = None,
) -> EvaluationReport:
    """
    Reload one trial's snapshots and split, rerun collective inference and
    write the prediction file.
    """
    manifest_path = Path(manifest_path)
    store = ArtifactStore(manifest_path.parent)
    manifest = store.load_model(RunManifest, manifest_path.name)
    config = manifest.config
    if dataset is not None:
        config = ExperimentConfig.model_validate({**config.model_dump(), "dataset": dataset.model_dump(), "synthetic": None})

    artifacts = next((a for a in manifest.trials if a.trial == trial), None)
    if artifacts is None:
        raise ConfigurationError(f"manifest {manifest_path} has no artifacts for trial {trial}")
    if variant not in artifacts.checkpoints:
        raise ConfigurationError(f"trial {trial} has no snapshots for variant {variant!r}")

    g = load_experiment_graph(config)
    split = store.load_split(artifacts.split)
    split.check_against(g)
    models = [store.load_checkpoint(path) for path in artifacts.checkpoints[variant]]
    seeds = derive_seeds(config.seed, trial)
    cfg = config.cl.model_copy(update={"seed": seeds.collective})
    source = manifest.label_sources[variant]
    result = CollectiveTrainingResult(
        kind=models[0].kind,
        config=cfg,
        label_source=source,
        models=models,
        history=CollectiveHistory(kind=models[0].kind, label_source=source, scenario=cfg.scenario),
    )
    inference = cl_infer(result, g, split, cfg, np.random.default_rng(seeds.inference), observed=observed_labels(split))
    lines = format_predictions(inference, split.test_eval)

    if output is None:
        target_store, relative = store, f"trial_{trial:02d}/eval_{variant}.tsv"
    else:
        output = Path(output)
        target_store, relative = ArtifactStore(output.parent), output.name
    written = str(target_store.path(target_store.write_lines(lines, relative)))

    return EvaluationReport(
        trial=trial,
        variant=variant,
        metric=config.metric,
        value=_score(config, g, inference.predictions, split.test_eval),
        predictions=written,
    )
