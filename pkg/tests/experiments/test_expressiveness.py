import json

import numpy as np
import pytest

from src.ai.collective import LabelSampleSet, MaskMatrix, exhaustive_embedding_moments, label_probabilities
from src.ai.common import CertificationError
from src.ai.gnn import create_model
from src.ai.wl import make_thm2_graph
from src.experiments import expressiveness
from src.experiments.expressiveness import (
    COLLAPSE_TOL,
    SYMMETRY_TOL,
    _run_check,
    check_baseline_collapse,
    check_collective_separation,
    check_deterministic_symmetry,
    check_prop2_certificate,
    check_radius_extension,
    check_surrogate_bound,
    check_thm2_certificate,
    check_unbiasedness,
    check_wl_round_bound,
    cmd_expressiveness,
    max_pairwise_difference,
)
from src.infrastructure.storage import ArtifactStore

SEEDS = list(range(20))


def test_max_pairwise_difference():
    z = np.array([[0.0, 1.0], [0.5, 1.0], [9.0, 9.0]])
    assert max_pairwise_difference(z, [0, 1]) == 0.5


def test_certificate_checks():
    assert check_thm2_certificate().passed
    assert check_prop2_certificate(1).passed
    assert check_prop2_certificate(2).passed


def test_untrained_gcn_collapses_symmetric_groups():
    result = check_baseline_collapse(SEEDS)
    assert result.passed, result.detail
    assert result.detail["seeds"] == 10


def test_sampled_labels_separate_symmetric_groups():
    result = check_collective_separation(SEEDS)
    assert result.passed, result.detail
    assert result.detail["successes"] >= 18
    assert result.detail["max_control_gap"] < SYMMETRY_TOL


@pytest.mark.parametrize("seed", range(3))
def test_expected_embedding_alone_cannot_separate_symmetric_groups(seed):
    cert = make_thm2_graph()
    g = cert.graph()
    n = g.num_nodes
    rng = np.random.default_rng(seed)
    first, second = (create_model("gcn", g.num_features + 2, 2, rng) for _ in range(2))
    zeros, mask = np.zeros((n, 2)), MaskMatrix.zeros(n)
    probs = label_probabilities(first, g, zeros, mask, LabelSampleSet.zeros(1, n, 2))
    mean, variance = exhaustive_embedding_moments(second, g, zeros, mask, probs)

    np.testing.assert_allclose(mean[cert.group_a].mean(axis=0), mean[cert.group_b].mean(axis=0), atol=1e-10)
    np.testing.assert_allclose(variance[[0, 2, 4, 6]].mean(axis=0), variance[[1, 3, 5, 7]].mean(axis=0), atol=1e-10)
    assert np.all(variance >= 0.0)


def test_probability_propagation_stays_symmetric():
    result = check_deterministic_symmetry(SEEDS[:5])
    assert result.passed, result.detail


def test_radius_extension():
    result = check_radius_extension(SEEDS[:10])
    assert result.passed, result.detail
    assert result.detail["first_iteration_max_difference"] < COLLAPSE_TOL
    assert result.detail["min_label_difference"] > 0.3
    assert result.detail["successes"] >= 9


def test_estimator_properties():
    assert check_surrogate_bound(SEEDS).passed
    assert check_unbiasedness(0).passed


def test_gcn_constant_on_refinement_classes():
    result = check_wl_round_bound(SEEDS)
    assert result.passed, result.detail


def test_raising_check_is_reported_as_failed():
    def broken():
        raise CertificationError("no pair")

    result = _run_check("broken", broken)
    assert not result.passed
    assert result.detail == {"error_type": "CertificationError", "error_message": "no pair"}


def test_battery_report(tmp_path, monkeypatch):
    monkeypatch.setattr(expressiveness, "check_radius_extension", lambda seeds: _failed("radius_extension_d2"))
    report = cmd_expressiveness(num_seeds=3, store=ArtifactStore(tmp_path))

    names = [check.name for check in report.checks]
    assert names[:3] == ["thm2_certificate", "prop2_certificate_d1", "prop2_certificate_d2"]
    assert "homophily_benchmark" not in names
    assert not report.passed
    saved = json.loads((tmp_path / "expressiveness.json").read_text())
    assert saved["seeds"] == [0, 1, 2]
    assert len(saved["checks"]) == len(names)


def _failed(name):
    from src.experiments.reports import CheckResult

    return CheckResult(name=name, passed=False)
