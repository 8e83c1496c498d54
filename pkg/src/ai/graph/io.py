"""
Text formats for graphs and splits.

Edge file:    one ``u<TAB>v`` pair per line, 0-based ids.
Feature file: one line per node, tab-separated floats; line index is the node id.
Label file:   ``node<TAB>class`` lines; nodes not listed are unlabeled.
Split file:   JSON document holding the four SplitSpec node arrays.
"""

from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from src.ai.common import GraphFormatError, InconsistentGraphError
from src.utils.logger import logger
from .graph import Graph, SplitSpec, UNLABELED

PathLike = Union[str, Path]


def _content_lines(path: PathLike):
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, raw in enumerate(handle, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if line.strip():
                yield line_number, line


def _parse_int_pair(path: PathLike, line_number: int, line: str) -> Tuple[int, int]:
    parts = line.split("\t")
    if len(parts) != 2:
        raise GraphFormatError(path, line_number, f"expected 2 tab-separated fields, got {len(parts)}")
    try:
        return int(parts[0]), int(parts[1])
    except ValueError:
        raise GraphFormatError(path, line_number, f"non-integer field in {line!r}")


def load_graph(
    edge_path: PathLike,
    feature_path: PathLike,
    label_path: PathLike,
    num_classes: Optional[int] = None,
) -> Graph:
    """
    Load a graph from the three text files.

    Args:
        edge_path: Edge list file
        feature_path: Feature matrix file (its line count fixes the node count)
        label_path: Label file
        num_classes: Class count; defaults to the largest label + 1

    Returns:
        Validated Graph with symmetrized, deduplicated edges
    """
    rows: List[List[float]] = []
    width = None
    for line_number, line in _content_lines(feature_path):
        try:
            row = [float(x) for x in line.split("\t")]
        except ValueError:
            raise GraphFormatError(feature_path, line_number, "non-numeric feature value")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise GraphFormatError(feature_path, line_number, f"expected {width} features, got {len(row)}")
        rows.append(row)
    n = len(rows)
    if n == 0:
        raise InconsistentGraphError(f"{feature_path} defines no nodes")
    features = np.array(rows, dtype=np.float64)

    edges = []
    for line_number, line in _content_lines(edge_path):
        u, v = _parse_int_pair(edge_path, line_number, line)
        if not (0 <= u < n and 0 <= v < n):
            raise InconsistentGraphError(
                f"{edge_path}:{line_number}: edge ({u}, {v}) references a node outside the {n} feature rows"
            )
        edges.append((u, v))

    labels = np.full(n, UNLABELED, dtype=np.int64)
    for line_number, line in _content_lines(label_path):
        node, cls = _parse_int_pair(label_path, line_number, line)
        if not (0 <= node < n):
            raise InconsistentGraphError(
                f"{label_path}:{line_number}: node {node} outside the {n} feature rows"
            )
        if cls < 0:
            raise GraphFormatError(label_path, line_number, f"negative class {cls}")
        labels[node] = cls

    graph = Graph.from_edges(n, edges, features=features, labels=labels, num_classes=num_classes)
    logger.info(
        "Graph loaded",
        num_nodes=graph.num_nodes,
        num_edges=graph.num_edges,
        num_features=graph.num_features,
        num_classes=graph.num_classes,
        labeled=int(graph.labeled_nodes.size),
    )
    return graph


def save_graph(g: Graph, edge_path: PathLike, feature_path: PathLike, label_path: PathLike):
    """Write the three text files so that ``load_graph`` reproduces ``g`` exactly."""
    with open(edge_path, "w", encoding="utf-8") as handle:
        for u, v in g.edges():
            handle.write(f"{u}\t{v}\n")
    with open(feature_path, "w", encoding="utf-8") as handle:
        for row in g.features:
            handle.write("\t".join(repr(float(x)) for x in row) + "\n")
    with open(label_path, "w", encoding="utf-8") as handle:
        for v in g.labeled_nodes.tolist():
            handle.write(f"{v}\t{int(g.labels[v])}\n")
    logger.info("Graph saved", edge_path=str(edge_path), num_nodes=g.num_nodes)


def load_cora(content_path: PathLike, cites_path: PathLike) -> Graph:
    """
    Convert the public Cora distribution into a Graph.

    ``cora.content`` lines are ``paper_id<TAB>f_1 ... f_p<TAB>class_name``;
    ``cora.cites`` lines are ``cited<TAB>citing``. Node ids follow content
    order; class names map to their sorted position.
    """
    ids: Dict[str, int] = {}
    rows: List[List[float]] = []
    names: List[str] = []
    for line_number, line in _content_lines(content_path):
        parts = line.split("\t")
        if len(parts) < 3:
            raise GraphFormatError(content_path, line_number, "expected id, features and class")
        try:
            rows.append([float(x) for x in parts[1:-1]])
        except ValueError:
            raise GraphFormatError(content_path, line_number, "non-numeric feature value")
        if parts[0] in ids:
            raise GraphFormatError(content_path, line_number, f"duplicate paper id {parts[0]}")
        ids[parts[0]] = len(ids)
        names.append(parts[-1])

    classes = {name: i for i, name in enumerate(sorted(set(names)))}
    edges = []
    skipped = 0
    for line_number, line in _content_lines(cites_path):
        parts = line.split("\t")
        if len(parts) != 2:
            raise GraphFormatError(cites_path, line_number, "expected 2 tab-separated fields")
        if parts[0] not in ids or parts[1] not in ids:
            skipped += 1
            continue
        edges.append((ids[parts[0]], ids[parts[1]]))

    if skipped:
        logger.warning("Citations referencing unknown papers skipped", skipped=skipped)
    return Graph.from_edges(
        len(ids),
        edges,
        features=np.array(rows, dtype=np.float64),
        labels=[classes[name] for name in names],
        num_classes=len(classes),
    )


def save_split(split: SplitSpec, path: PathLike):
    Path(path).write_text(split.model_dump_json(indent=2), encoding="utf-8")


def load_split(path: PathLike) -> SplitSpec:
    return SplitSpec.model_validate_json(Path(path).read_text(encoding="utf-8"))
