import numpy as np
import pytest

from src.ai.common import GraphFormatError, InconsistentGraphError
from src.ai.graph import SplitSpec, load_cora, load_graph, load_split, save_graph, save_split


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


def test_save_then_load_reproduces_graph(toy_graph, tmp_path):
    paths = tmp_path / "e.tsv", tmp_path / "f.tsv", tmp_path / "l.tsv"
    save_graph(toy_graph, *paths)
    loaded = load_graph(*paths, num_classes=2)
    assert loaded.edges() == toy_graph.edges()
    np.testing.assert_array_equal(loaded.features, toy_graph.features)
    np.testing.assert_array_equal(loaded.labels, toy_graph.labels)


def test_load_graph_reports_line_number(tmp_path):
    features = _write(tmp_path / "f.tsv", "1.0\t0.0\n0.0\t1.0\n1.0\t1.0\n")
    labels = _write(tmp_path / "l.tsv", "0\t1\n")
    edges = _write(tmp_path / "e.tsv", "0\t1\n1 2\n")
    with pytest.raises(GraphFormatError, match=r"e\.tsv:2"):
        load_graph(edges, features, labels)


def test_load_graph_rejects_ragged_features(tmp_path):
    features = _write(tmp_path / "f.tsv", "1.0\t0.0\n0.0\n")
    with pytest.raises(GraphFormatError, match="expected 2 features"):
        load_graph(_write(tmp_path / "e.tsv", ""), features, _write(tmp_path / "l.tsv", ""))


def test_load_graph_rejects_edge_outside_nodes(tmp_path):
    features = _write(tmp_path / "f.tsv", "1.0\n1.0\n")
    with pytest.raises(InconsistentGraphError):
        load_graph(_write(tmp_path / "e.tsv", "0\t5\n"), features, _write(tmp_path / "l.tsv", ""))


def test_load_cora_maps_ids_and_classes(tmp_path):
    content = _write(
        tmp_path / "cora.content",
        "31336\t0\t1\tNeural_Networks\n1061127\t1\t0\tRule_Learning\n1106406\t1\t1\tNeural_Networks\n",
    )
    cites = _write(tmp_path / "cora.cites", "31336\t1061127\n1106406\t31336\n999\t31336\n")
    g = load_cora(content, cites)
    assert g.num_nodes == 3
    assert g.edges() == [(0, 1), (0, 2)]
    np.testing.assert_array_equal(g.labels, [0, 1, 0])
    assert g.num_classes == 2


def test_split_file_round_trip(tmp_path):
    split = SplitSpec(train_labeled=[0, 1], validation=[2], test_eval=[3, 4], test_labeled=[5])
    save_split(split, tmp_path / "split.json")
    assert load_split(tmp_path / "split.json") == split
