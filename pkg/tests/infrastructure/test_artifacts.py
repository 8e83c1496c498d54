import numpy as np
import pytest
from pydantic import ValidationError

from src.ai.gnn import ModelKind, create_model, eval_probs
from src.ai.graph import SplitSpec
from src.experiments.reports import CheckResult, ExpressivenessReport
from src.infrastructure.storage import ArtifactStore


@pytest.fixture
def store(tmp_path):
    return ArtifactStore(tmp_path / "artifacts")


def test_root_is_created(tmp_path):
    ArtifactStore(tmp_path / "a" / "b")
    assert (tmp_path / "a" / "b").is_dir()


def test_documents_round_trip(store):
    report = ExpressivenessReport(seeds=[0, 1], checks=[CheckResult(name="x", passed=True, detail={"gap": 0.5})])
    relative = store.save_model(report, "nested/report.json")
    assert relative == "nested/report.json"
    assert store.load_model(ExpressivenessReport, relative) == report


def test_loading_wrong_document_type_fails(store):
    store.save_model(SplitSpec(train_labeled=[1]), "split.json")
    with pytest.raises(ValidationError):
        store.load_model(ExpressivenessReport, "split.json")


def test_missing_document_raises_os_error(store):
    with pytest.raises(FileNotFoundError):
        store.load_model(ExpressivenessReport, "absent.json")


def test_checkpoints_and_splits(store, toy_graph, rng):
    model = create_model(ModelKind.GCN, 3, 2, rng)
    store.save_checkpoint(model, "t/model.json")
    restored = store.load_checkpoint("t/model.json")
    np.testing.assert_array_equal(
        eval_probs(model, toy_graph, toy_graph.features), eval_probs(restored, toy_graph, toy_graph.features)
    )

    split = SplitSpec(train_labeled=[0, 3], test_eval=[1], test_labeled=[4])
    store.save_split(split, "t/split.json")
    assert store.load_split("t/split.json") == split


def test_write_lines(store):
    relative = store.write_lines(["0\t1\t0.2,0.8", "1\t0\t0.9,0.1"], "predictions/x.tsv")
    assert store.exists(relative)
    assert store.path(relative).read_text() == "0\t1\t0.2,0.8\n1\t0\t0.9,0.1\n"
