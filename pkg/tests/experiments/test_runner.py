import numpy as np
import pytest

from src.ai.common import ConfigurationError
from src.ai.graph import load_graph
from src.experiments.config import ExperimentConfig, SyntheticSpec
from src.experiments.reports import RunManifest, TrialReport
from src.experiments.runner import (
    build_report,
    cmd_ablate,
    cmd_eval,
    cmd_run,
    cmd_synth,
    derive_seeds,
    execute_trial,
    summarize,
)
from src.infrastructure.storage import ArtifactStore


def test_seeds_are_fixed_offsets():
    seeds = derive_seeds(7, 2)
    assert (seeds.split, seeds.baseline, seeds.collective, seeds.inference) == (3008, 3009, 3010, 3011)
    assert derive_seeds(7, 0) != derive_seeds(7, 1)


def test_trial_needs_a_seed(small_config):
    with pytest.raises(ConfigurationError):
        execute_trial(small_config.model_copy(update={"seed": None}), 0)


def test_single_trial_record(small_config):
    record = execute_trial(small_config, 0)
    assert record.trial == 0
    assert record.split_sizes == {"train_labeled": 10, "validation": 10, "test_eval": 20, "test_labeled": 20}
    assert 0.0 <= record.baseline_metric <= 1.0
    assert record.improvement == pytest.approx(record.collective_metric - record.baseline_metric)
    assert len(record.collective_curve) == small_config.cl.T
    assert record.collective_curve[-1] == record.collective_metric
    assert [s.iteration for s in record.collective_history] == [1, 2]
    assert record.artifacts is None


def test_without_collective_the_baseline_stands_in(small_config):
    record = execute_trial(small_config.model_copy(update={"collective": False}), 0)
    assert record.collective_metric == record.baseline_metric
    assert record.collective_curve == []


def test_run_writes_report_and_manifest(small_config, tmp_path):
    store = ArtifactStore(tmp_path / "run")
    report = cmd_run(small_config, store=store)

    assert [r.trial for r in report.trials] == [0, 1]
    assert report.reproducible
    assert report.collective.t_test is not None or report.collective.note
    assert TrialReport.model_validate_json((tmp_path / "run" / "report.json").read_text()) == report

    manifest = store.load_model(RunManifest, "manifest.json")
    assert manifest.report == "report.json"
    assert [a.trial for a in manifest.trials] == [0, 1]
    artifacts = manifest.trials[0]
    assert store.exists(artifacts.split)
    assert store.exists(artifacts.baseline_checkpoint)
    assert artifacts.checkpoints["collective"] == [
        "trial_00/collective/iteration_01.json",
        "trial_00/collective/iteration_02.json",
    ]
    assert store.exists(artifacts.predictions["collective"])


def test_run_is_reproducible(small_config, tmp_path):
    cmd_run(small_config, store=ArtifactStore(tmp_path / "a"))
    cmd_run(small_config, store=ArtifactStore(tmp_path / "b"))
    for name in ("report.json", "manifest.json", "trial_01/predictions/collective.tsv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_eval_reproduces_run_predictions(small_config, tmp_path):
    store = ArtifactStore(tmp_path / "run")
    report = cmd_run(small_config, store=store)
    evaluation = cmd_eval(tmp_path / "run" / "manifest.json", trial=1)

    assert evaluation.value == report.trials[1].collective_metric
    produced = (tmp_path / "run" / "trial_01" / "eval_collective.tsv").read_text()
    assert evaluation.predictions.endswith("eval_collective.tsv")
    assert produced == (tmp_path / "run" / "trial_01" / "predictions" / "collective.tsv").read_text()

    custom = cmd_eval(tmp_path / "run" / "manifest.json", trial=0, output=tmp_path / "out" / "preds.tsv")
    assert (tmp_path / "out" / "preds.tsv").exists()
    assert custom.trial == 0


def test_eval_rejects_unknown_trial_and_variant(small_config, tmp_path):
    cmd_run(small_config.model_copy(update={"trials": 1}), store=ArtifactStore(tmp_path))
    with pytest.raises(ConfigurationError):
        cmd_eval(tmp_path / "manifest.json", trial=4)
    with pytest.raises(ConfigurationError):
        cmd_eval(tmp_path / "manifest.json", trial=0, variant="uniform")


def test_ablate_adds_variants_on_the_same_trials(small_config, tmp_path):
    report = cmd_ablate(small_config, store=ArtifactStore(tmp_path))
    assert set(report.ablations) == {"uniform", "true_only"}
    plain = execute_trial(small_config, 0)
    assert report.trials[0].baseline_metric == plain.baseline_metric
    assert report.trials[0].collective_metric == plain.collective_metric
    assert set(report.trials[0].ablation_metrics) == {"uniform", "true_only"}


def test_summaries_handle_small_and_degenerate_samples():
    single = summarize("collective", [0.8], [0.7])
    assert single.t_test is None and single.note
    assert single.improvements == [pytest.approx(0.1)]

    constant = summarize("collective", [0.5, 0.75], [0.25, 0.5])
    assert constant.t_test is None and "variance" in constant.note

    regular = summarize("collective", [0.8, 0.9, 0.7], [0.7, 0.7, 0.7])
    assert regular.t_test.dof == 2


def test_report_orders_trials(small_config):
    records = [execute_trial(small_config, trial) for trial in (1, 0)]
    report = build_report(small_config, records, reproducible=False)
    assert [r.trial for r in report.trials] == [0, 1]
    assert not report.reproducible


def test_synth_writes_loadable_graph(tmp_path):
    spec = SyntheticSpec(n=50, num_classes=2, feature_dim=3, feature_noise=0.5)
    paths = cmd_synth(spec, 11, tmp_path / "graph")
    g = load_graph(paths["edge_path"], paths["feature_path"], paths["label_path"])
    expected = spec.generate(np.random.default_rng(11))
    assert g.edges() == expected.edges()
    np.testing.assert_array_equal(g.labels, expected.labels)
    np.testing.assert_allclose(g.features, expected.features)


def test_dataset_config_runs_from_files(small_config, tmp_path):
    paths = cmd_synth(small_config.synthetic, 0, tmp_path / "graph")
    config = ExperimentConfig.model_validate(
        {**small_config.model_dump(), "synthetic": None, "dataset": {"format": "tsv", **paths}, "trials": 1}
    )
    record = execute_trial(config, 0)
    assert 0.0 <= record.collective_metric <= 1.0
