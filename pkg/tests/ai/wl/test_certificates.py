import numpy as np
import pytest

from src.ai.common import CertificationError, ParameterError
from src.ai.gnn import create_model, forward
from src.ai.graph import Graph, UNLABELED
from src.ai.wl import egonets_isomorphic, make_prop2_graph, make_thm2_graph, wl_refine, initial_colors


def test_symmetric_groups_certificate():
    cert = make_thm2_graph()
    cert.verify()
    g = cert.graph()
    colors = wl_refine(g, initial_colors(g)).colors
    assert len(set(colors[cert.group_a + cert.group_b].tolist())) == 1
    assert cert.automorphisms_checked == len(cert.group_a) * len(cert.group_b)
    assert all(g.labels[v] == -1 for v in cert.group_a + cert.group_b)


def test_tampered_symmetric_certificate_fails():
    cert = make_thm2_graph()
    forged = cert.model_copy(update={"group_b": [cert.group_a[1]], "group_a": [cert.group_a[0]]})
    with pytest.raises(CertificationError):
        forged.verify()


@pytest.mark.parametrize("d", [1, 2])
def test_radius_certificate(d):
    cert = make_prop2_graph(d)
    cert.verify()
    g = cert.graph()
    bare = Graph.from_edges(g.num_nodes, g.edges(), num_classes=2)
    u, v = cert.pair
    assert g.num_nodes <= 12
    assert egonets_isomorphic(bare, u, v, d, annotate_degree=True)
    assert not egonets_isomorphic(bare, u, v, 2 * d, annotate_degree=True)
    a, b = cert.distinguishing_nodes
    assert not egonets_isomorphic(bare, a, b, d, annotate_degree=True)
    assert sorted([g.labels[a], g.labels[b]]) == [0, 1]
    assert set(g.labels[np.setdiff1d(np.arange(g.num_nodes), [a, b])].tolist()) == {UNLABELED}


@pytest.mark.parametrize("d", [1, 2])
def test_radius_certificate_features_encode_degree(d):
    g = make_prop2_graph(d).graph()
    np.testing.assert_array_equal(g.features.argmax(axis=1), g.degrees)
    np.testing.assert_array_equal(g.features.sum(axis=1), np.ones(g.num_nodes))


@pytest.mark.parametrize("seed", range(5))
def test_two_layer_gcn_collapses_certified_pair(seed):
    cert = make_prop2_graph(2)
    g = cert.graph()
    u, v = cert.pair
    model = create_model("gcn", g.num_features, 2, np.random.default_rng(seed), hidden_dim=8)
    z, _ = forward(model, g, g.features, False)
    np.testing.assert_allclose(z[u], z[v], atol=1e-9)


def test_radius_certificate_with_equal_labels_fails():
    cert = make_prop2_graph(1)
    a, b = cert.distinguishing_nodes
    labels = list(cert.labels)
    labels[b] = labels[a]
    with pytest.raises(CertificationError, match="different labels"):
        cert.model_copy(update={"labels": labels}).verify()


def test_radius_certificate_with_unrelated_nodes_fails():
    cert = make_prop2_graph(1)
    u, v = cert.pair
    with pytest.raises(CertificationError):
        cert.model_copy(update={"distinguishing_nodes": (u, u)}).verify()


def test_certificate_round_trips_through_json():
    cert = make_prop2_graph(1)
    restored = type(cert).model_validate_json(cert.model_dump_json())
    restored.verify()
    assert restored.graph().edges() == cert.graph().edges()


def test_unsupported_radius():
    with pytest.raises(ParameterError):
        make_prop2_graph(3)
