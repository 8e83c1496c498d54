import numpy as np
import pytest

from src.ai.common import DegenerateBatchError, InconsistentGraphError
from src.ai.gnn import ModelKind, create_model, eval_probs, predict_classes, train_baseline
from src.ai.graph import Graph, SplitSpec


@pytest.fixture
def separable_graph():
    """Two triangles whose features spell out the class."""
    edges = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 5)]
    labels = [0, 0, 0, 1, 1, 1]
    features = np.eye(2)[labels] + 0.05 * np.random.default_rng(3).normal(size=(6, 2))
    return Graph.from_edges(6, edges, features=features, labels=labels, num_classes=2)


@pytest.mark.parametrize("kind", [ModelKind.GCN, ModelKind.SAGE])
def test_baseline_fits_separable_graph(kind, separable_graph):
    rng = np.random.default_rng(0)
    model = create_model(kind, 2, 2, rng, hidden_dim=8, dropout_p=0.0, sample_size=2)
    split = SplitSpec(train_labeled=[0, 1, 3, 4], test_eval=[2, 5])
    best, history = train_baseline(model, separable_graph, split, 150, 0.05, 0.0, None, rng)

    assert history.epochs[-1].loss < history.epochs[0].loss
    assert history.best_epoch == len(history.epochs)
    preds = predict_classes(eval_probs(best, separable_graph, separable_graph.features))
    np.testing.assert_array_equal(preds[[0, 1, 3, 4]], [0, 0, 1, 1])


def test_early_stopping_keeps_best_validation_snapshot(separable_graph):
    rng = np.random.default_rng(1)
    model = create_model(ModelKind.GCN, 2, 2, rng, hidden_dim=8)
    split = SplitSpec(train_labeled=[0, 3], validation=[1, 4])
    best, history = train_baseline(model, separable_graph, split, 500, 0.05, 5e-4, 3, rng)

    assert history.stopped_early
    assert len(history.epochs) == history.best_epoch + 3
    assert history.best_val_accuracy == max(e.val_accuracy for e in history.epochs)
    assert best is not model


def test_empty_training_set_is_rejected(separable_graph, rng):
    model = create_model(ModelKind.GCN, 2, 2, rng)
    with pytest.raises(DegenerateBatchError):
        train_baseline(model, separable_graph, SplitSpec(train_labeled=[]), 5, 0.01, 0.0, None, rng)


def test_unlabeled_training_node_is_rejected(toy_graph, rng):
    model = create_model(ModelKind.GCN, 3, 2, rng)
    with pytest.raises(InconsistentGraphError):
        train_baseline(model, toy_graph, SplitSpec(train_labeled=[0, 5]), 5, 0.01, 0.0, None, rng)


def test_training_is_reproducible(separable_graph):
    def run():
        rng = np.random.default_rng(7)
        model = create_model(ModelKind.SAGE, 2, 2, rng, hidden_dim=4, sample_size=1)
        best, history = train_baseline(model, separable_graph, SplitSpec(train_labeled=[0, 3]), 20, 0.01, 0.0, None, rng)
        return best, history

    first, history_a = run()
    second, history_b = run()
    assert history_a == history_b
    for a, b in zip(first.parameters(), second.parameters()):
        np.testing.assert_array_equal(a.value, b.value)


def test_zero_epochs_returns_initial_parameters(separable_graph, rng):
    model = create_model(ModelKind.GCN, 2, 2, rng, hidden_dim=4)
    initial = model.clone()
    best, history = train_baseline(model, separable_graph, SplitSpec(train_labeled=[0, 3]), 0, 0.05, 0.0, None, rng)
    assert history.epochs == []
    for left, right in zip(best.parameters(), initial.parameters()):
        np.testing.assert_array_equal(left.value, right.value)


@pytest.mark.parametrize("seed", range(3))
def test_loss_does_not_increase_early(separable_graph, seed):
    rng = np.random.default_rng(seed)
    model = create_model(ModelKind.GCN, 2, 2, rng, hidden_dim=8, dropout_p=0.0)
    _, history = train_baseline(model, separable_graph, SplitSpec(train_labeled=[0, 1, 3, 4]), 10, 0.005, 0.0, None, rng)
    losses = np.array([e.loss for e in history.epochs])
    assert np.all(np.diff(losses) <= 1e-9)
