import numpy as np
import pytest

from src.ai.common import (
    DegenerateBatchError,
    DimensionError,
    ParameterError,
    dropout,
    dropout_backward,
    masked_cross_entropy,
    matmul,
    relu,
    relu_backward,
    softmax_rows,
)
from tests.conftest import assert_grad_close, numeric_grad


def test_matmul_shape_mismatch_names_both_shapes():
    with pytest.raises(DimensionError, match=r"\(2, 3\).*\(2, 3\)"):
        matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_softmax_rows_is_stable_for_large_logits():
    probs = softmax_rows(np.array([[1000.0, 1000.0], [0.0, -1000.0]]))
    np.testing.assert_allclose(probs, [[0.5, 0.5], [1.0, 0.0]], atol=1e-12)
    assert np.all(np.isfinite(probs))


def test_masked_cross_entropy_ignores_zero_weight_rows():
    probs = np.array([[0.9, 0.1], [0.2, 0.8], [0.5, 0.5]])
    targets = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
    loss, dlogits = masked_cross_entropy(probs, targets, [1.0, 0.0, 1.0])
    assert loss == pytest.approx(-(np.log(0.9) + np.log(0.5)) / 2)
    np.testing.assert_array_equal(dlogits[1], [0.0, 0.0])


def test_masked_cross_entropy_all_zero_weights_is_degenerate():
    with pytest.raises(DegenerateBatchError):
        masked_cross_entropy(np.full((2, 2), 0.5), np.eye(2), [0.0, 0.0])


@pytest.mark.parametrize("seed", range(20))
def test_masked_cross_entropy_gradient_matches_finite_differences(seed):
    rng = np.random.default_rng(seed)
    logits = rng.normal(size=(5, 3))
    targets = np.eye(3)[rng.integers(0, 3, size=5)]
    weights = (rng.random(5) < 0.6).astype(float)
    weights[0] = 1.0

    _, analytic = masked_cross_entropy(softmax_rows(logits), targets, weights)
    numeric = numeric_grad(lambda x: masked_cross_entropy(softmax_rows(x), targets, weights)[0], logits)
    assert_grad_close(analytic, numeric)


def test_relu_backward_passes_no_gradient_at_zero():
    x = np.array([[-1.0, 0.0, 2.0]])
    np.testing.assert_array_equal(relu(x), [[0.0, 0.0, 2.0]])
    np.testing.assert_array_equal(relu_backward(x, np.ones_like(x)), [[0.0, 0.0, 1.0]])


def test_dropout_is_identity_in_eval_mode():
    x = np.arange(6.0).reshape(2, 3)
    out, mask = dropout(x, 0.5, None, training=False)
    np.testing.assert_array_equal(out, x)
    np.testing.assert_array_equal(mask, np.ones_like(x))


def test_dropout_scales_kept_entries(rng):
    x = np.ones((200, 50))
    out, mask = dropout(x, 0.5, rng)
    assert set(np.unique(out)) <= {0.0, 2.0}
    assert out.mean() == pytest.approx(1.0, abs=0.05)
    np.testing.assert_array_equal(dropout_backward(np.ones_like(x), mask), mask)


def test_dropout_rejects_bad_probability(rng):
    with pytest.raises(ParameterError):
        dropout(np.ones((2, 2)), 1.0, rng)
    with pytest.raises(ParameterError, match="generator"):
        dropout(np.ones((2, 2)), 0.5, None, training=True)
