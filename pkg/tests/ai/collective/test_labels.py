import numpy as np
import pytest

from src.ai.collective import LabelSampleSet, MaskMatrix, build_input, draw_label_samples, uniform_probs
from src.ai.common import DimensionError, ParameterError


def test_draw_frequencies_match_probabilities(rng):
    probs = np.array([[0.2, 0.5, 0.3], [1.0, 0.0, 0.0]])
    samples = draw_label_samples(probs, 20000, rng)
    assert samples.shape == (20000, 2, 3)
    np.testing.assert_array_equal(samples.sum(axis=2), 1.0)
    freq = samples.mean(axis=0)
    np.testing.assert_allclose(freq[0], probs[0], atol=0.015)
    np.testing.assert_array_equal(freq[1], probs[1])


@pytest.mark.parametrize(
    "row",
    [[0.0, 0.5, 0.5], [0.5, 0.0, 0.5], [0.5, 0.5, 0.0], [0.1, 0.2, 0.7, 0.0]],
)
def test_zero_probability_class_is_never_drawn(row, rng):
    samples = draw_label_samples(np.array([row]), 5000, rng)
    drawn = samples.sum(axis=(0, 1))
    assert np.all(drawn[np.array(row) == 0.0] == 0)
    assert np.all(drawn[np.array(row) > 0.0] > 0)


def test_draw_rejects_zero_samples(rng):
    with pytest.raises(ParameterError):
        draw_label_samples(uniform_probs(3, 2), 0, rng)


def test_sample_set_validates_rows():
    with pytest.raises(ParameterError):
        LabelSampleSet(np.full((1, 2, 2), 0.5), source_iteration=1)
    with pytest.raises(ParameterError):
        LabelSampleSet(np.ones((1, 2, 2)), source_iteration=0, zero_base=True)
    probabilistic = LabelSampleSet(np.full((1, 2, 2), 0.5), source_iteration=1, probabilistic=True)
    assert probabilistic.K == 1


def test_zero_base():
    base = LabelSampleSet.zeros(3, 4, 2)
    assert (base.K, base.num_nodes, base.num_classes) == (3, 4, 2)
    assert base.zero_base and base.source_iteration == 0


def test_build_input_mixes_visible_and_sampled_labels(toy_graph):
    y = toy_graph.label_onehot([0, 3])
    yhat = np.zeros((6, 2))
    yhat[:, 1] = 1.0
    mask = MaskMatrix(np.array([1.0, 0, 0, 0, 0, 0]))
    x = build_input(toy_graph, y, yhat, mask)

    assert x.shape == (6, 5)
    np.testing.assert_array_equal(x[:, :3], toy_graph.features)
    np.testing.assert_array_equal(x[0, 3:], [1, 0])
    # node 3 is labeled but hidden: its channel comes from the sample
    np.testing.assert_array_equal(x[3, 3:], [0, 1])
    np.testing.assert_array_equal(x[5, 3:], [0, 1])


def test_build_input_checks_shapes(toy_graph):
    with pytest.raises(DimensionError):
        build_input(toy_graph, np.zeros((6, 3)), np.zeros((6, 2)), MaskMatrix.zeros(6))
    with pytest.raises(DimensionError):
        build_input(toy_graph, np.zeros((6, 2)), np.zeros((6, 2)), MaskMatrix.zeros(5))
