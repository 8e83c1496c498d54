import numpy as np
import pytest

from src.ai.collective import CLConfig, MaskMatrix, Scenario, sample_mask
from src.ai.common import MaskError


def test_test_unlabeled_mask_is_all_zero_and_consumes_no_randomness(toy_graph):
    rng = np.random.default_rng(0)
    cfg = CLConfig(scenario=Scenario.TEST_UNLABELED)
    mask = sample_mask(toy_graph, [0, 1, 3], cfg, rng)
    assert not mask.node_bits.any()
    assert rng.random() == np.random.default_rng(0).random()


def test_mask_only_touches_labeled_nodes(toy_graph, rng):
    cfg = CLConfig(mask_rate=0.5)
    for _ in range(50):
        mask = sample_mask(toy_graph, [0, 1, 3], cfg, rng)
        assert set(mask.visible_nodes) <= {0, 1, 3}


def test_required_hidden_node_survives_low_mask_rate(toy_graph, rng):
    cfg = CLConfig(mask_rate=0.01)
    for _ in range(20):
        mask = sample_mask(toy_graph, [0, 1], cfg, rng)
        assert mask.node_bits[[0, 1]].sum() < 2


def test_all_visible_allowed_without_requirement(toy_graph):
    cfg = CLConfig(mask_rate=1e-9)
    mask = sample_mask(toy_graph, [0, 1, 3], cfg, np.random.default_rng(0), require_hidden=False)
    np.testing.assert_array_equal(mask.visible_nodes, [0, 1, 3])


def test_visibility_rate(rng):
    from src.ai.graph import Graph

    g = Graph.from_edges(2000, [], labels=np.zeros(2000, dtype=int), num_classes=1)
    mask = sample_mask(g, np.arange(2000), CLConfig(mask_rate=0.3), rng)
    # 1400 expected visible, sd about 20
    assert abs(mask.node_bits.sum() - 1400) < 100


@pytest.mark.parametrize("labeled", [[], [5], [9]])
def test_bad_labeled_sets_are_rejected(toy_graph, rng, labeled):
    with pytest.raises(MaskError):
        sample_mask(toy_graph, labeled, CLConfig(), rng)


def test_mask_bits_must_be_binary():
    with pytest.raises(MaskError):
        MaskMatrix(np.array([0.0, 0.5]))


def test_broadcast_has_identical_columns():
    mask = MaskMatrix(np.array([1.0, 0.0, 1.0]))
    np.testing.assert_array_equal(mask.broadcast(2), [[1, 1], [0, 0], [1, 1]])
    np.testing.assert_array_equal(mask.complement, [0, 1, 0])
