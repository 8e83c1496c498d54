import numpy as np
import pytest

from src.ai.common import DimensionError, ParameterError, masked_cross_entropy
from src.ai.gnn import (
    EVAL_SAMPLING_SEED,
    ModelKind,
    backward,
    create_model,
    forward,
    predict_probs,
    readout_backward,
)
from src.ai.graph import sym_norm_propagate
from tests.conftest import assert_grad_close, numeric_param_grad, random_graph


def _loss_and_grads(model, g, x, targets, weights, seed):
    """Full forward/backward with a freshly seeded generator, so dropout and sampling repeat exactly."""
    model.zero_grad()
    z, cache = forward(model, g, x, True, np.random.default_rng(seed))
    loss, dlogits = masked_cross_entropy(predict_probs(model, z), targets, weights)
    backward(model, cache, readout_backward(model, z, dlogits))
    return loss


@pytest.mark.parametrize("kind", [ModelKind.GCN, ModelKind.SAGE])
@pytest.mark.parametrize("seed", range(20))
def test_backward_matches_finite_differences(kind, seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng)
    model = create_model(kind, g.num_features, g.num_classes, rng, hidden_dim=4, dropout_p=0.3, sample_size=2)
    targets = g.label_onehot()
    weights = (rng.random(g.num_nodes) < 0.7).astype(float)
    weights[0] = 1.0

    _loss_and_grads(model, g, g.features, targets, weights, seed + 100)
    analytic = [p.grad.copy() for p in model.parameters()]

    def loss():
        z, _ = forward(model, g, g.features, True, np.random.default_rng(seed + 100))
        return masked_cross_entropy(predict_probs(model, z), targets, weights)[0]

    for param, grad in zip(model.parameters(), analytic):
        assert_grad_close(grad, numeric_param_grad(loss, param))


def test_gcn_eval_forward_matches_formula(toy_graph, rng):
    model = create_model(ModelKind.GCN, toy_graph.num_features, toy_graph.num_classes, rng, hidden_dim=5)
    w1, w2 = (p.value for p in model.layer_params)
    h1 = np.maximum(sym_norm_propagate(toy_graph, toy_graph.features) @ w1, 0.0)
    expected = sym_norm_propagate(toy_graph, h1) @ w2
    z, _ = forward(model, toy_graph, toy_graph.features, False)
    np.testing.assert_allclose(z, expected, atol=1e-12)


def test_sage_eval_forward_is_deterministic(toy_graph, rng):
    model = create_model(ModelKind.SAGE, toy_graph.num_features, toy_graph.num_classes, rng, sample_size=1)
    first, _ = forward(model, toy_graph, toy_graph.features, False)
    second, _ = forward(model, toy_graph, toy_graph.features, False, np.random.default_rng(123))
    np.testing.assert_array_equal(first, second)
    assert EVAL_SAMPLING_SEED == 0


def test_sage_training_needs_generator(toy_graph, rng):
    model = create_model(ModelKind.SAGE, toy_graph.num_features, toy_graph.num_classes, rng)
    with pytest.raises(ParameterError):
        forward(model, toy_graph, toy_graph.features, True, None)


@pytest.mark.parametrize("kind", [ModelKind.GCN, ModelKind.SAGE])
def test_forward_rejects_wrong_input_width(kind, toy_graph, rng):
    model = create_model(kind, toy_graph.num_features + 1, toy_graph.num_classes, rng)
    with pytest.raises(DimensionError):
        forward(model, toy_graph, toy_graph.features, False)


def test_isolated_node_gets_self_term_only(rng):
    from src.ai.graph import Graph

    g = Graph.from_edges(3, [(0, 1)], features=np.eye(3))
    model = create_model(ModelKind.GCN, 3, 1, rng, hidden_dim=2)
    z, _ = forward(model, g, g.features, False)
    w1, w2 = (p.value for p in model.layer_params)
    np.testing.assert_allclose(z[2], np.maximum(g.features[2] @ w1, 0.0) @ w2, atol=1e-12)
