import numpy as np
import pytest

from src.ai.common import ParameterError
from src.experiments.synthetic import block_probabilities, community_sizes, expected_edge_count, synth_homophily


def test_community_sizes():
    np.testing.assert_array_equal(community_sizes(10, 3), [4, 3, 3])
    sizes = community_sizes(700, 3, imbalance=2.0)
    assert sizes.sum() == 700
    assert sizes[0] > sizes[1] > sizes[2]


@pytest.mark.parametrize("seed", range(5))
def test_edge_count_within_three_sigma(seed):
    sizes = community_sizes(400, 4)
    probs = block_probabilities(sizes, 0.8, 8.0)
    mean, sd = expected_edge_count(sizes, probs)
    assert mean == pytest.approx(400 * 8.0 / 2)
    g = synth_homophily(400, 4, None, 0.8, None, np.random.default_rng(seed), avg_degree=8.0)
    assert abs(g.num_edges - mean) <= 3 * sd


def test_perfect_homophily_neighbors_share_labels():
    g = synth_homophily(200, 3, None, 1.0, None, np.random.default_rng(0), avg_degree=6.0)
    for u, v in g.edges():
        assert g.labels[u] == g.labels[v]
    # neighbor-majority vote recovers every non-isolated label
    for v in range(g.num_nodes):
        nbrs = g.neighbors(v)
        if nbrs.size:
            assert np.bincount(g.labels[nbrs], minlength=3).argmax() == g.labels[v]


def test_more_communities_than_classes():
    g = synth_homophily(120, 2, 4, 0.9, 0.5, np.random.default_rng(1), feature_dim=3)
    assert g.num_classes == 2
    np.testing.assert_array_equal(np.bincount(g.labels), [60, 60])
    assert g.num_features == 3


def test_informative_features_cluster_by_class():
    g = synth_homophily(300, 3, None, 0.9, 0.1, np.random.default_rng(2))
    for c in range(3):
        rows = g.features[g.labels == c]
        assert rows.std(axis=0).max() < 0.2


def test_same_seed_same_graph():
    a = synth_homophily(100, 2, None, 0.9, None, np.random.default_rng(5))
    b = synth_homophily(100, 2, None, 0.9, None, np.random.default_rng(5))
    assert a.edges() == b.edges()
    np.testing.assert_array_equal(a.features, b.features)


@pytest.mark.parametrize(
    "kwargs",
    [dict(communities=1), dict(homophily=0.4), dict(imbalance=0.5)],
)
def test_invalid_parameters(kwargs):
    args = dict(n=50, C=2, communities=None, homophily=0.9, feature_noise=None, rng=np.random.default_rng(0))
    args.update(kwargs)
    with pytest.raises(ParameterError):
        synth_homophily(**args)


def test_degree_too_high_for_graph():
    with pytest.raises(ParameterError):
        block_probabilities(community_sizes(10, 2), 0.9, 50.0)
