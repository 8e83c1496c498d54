"""
Monte Carlo collective inference: every iteration averages J masks x K label
samples of eval-mode embeddings, then its probabilities seed the next
iteration's label draws.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from src.ai.common import ConfigurationError, Matrix
from src.ai.gnn import predict_classes, predict_probs
from src.ai.graph import Graph, SplitSpec
from src.utils.logger import logger
from .config import CLConfig, LabelSource
from .estimator import mc_embedding, next_label_samples
from .masks import sample_mask
from .training import CollectiveTrainingResult


@dataclass(eq=False)
class InferenceResult:
    predictions: np.ndarray
    probs: Matrix
    embeddings: List[Matrix] = field(default_factory=list)
    iteration_probs: List[Matrix] = field(default_factory=list)


def cl_infer(
    result: CollectiveTrainingResult,
    g_te: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    rng: np.random.Generator,
    observed: Optional[Sequence[int]] = None,
) -> InferenceResult:
    """
    Predict every node of ``g_te`` with the snapshots of a collective run.

    Args:
        result: Output of collective training (one snapshot per iteration)
        g_te: Test graph
        split: Node sets; ``test_labeled`` are the observed test labels
        cfg: Inference configuration; its scenario must match training
        rng: Generator for masks and label draws
        observed: Nodes whose true labels may be shown (defaults to ``split.test_labeled``)

    Returns:
        InferenceResult with argmax predictions of the last iteration and the
        per-iteration averaged embeddings and probabilities
    """
    if cfg.scenario != result.scenario:
        raise ConfigurationError(
            f"model trained for scenario {result.scenario.value} cannot infer under {cfg.scenario.value}"
        )
    if cfg.T > len(result.models):
        raise ConfigurationError(f"inference asks for {cfg.T} iterations, training produced {len(result.models)}")

    observed = np.asarray(split.test_labeled if observed is None else list(observed), dtype=np.int64)
    y_l = g_te.label_onehot(observed)
    source = result.label_source
    out = InferenceResult(predictions=np.zeros(g_te.num_nodes, dtype=np.int64), probs=None)
    predicted = None

    for iteration in range(1, cfg.T + 1):
        model = result.models[iteration - 1]
        total = None
        for _ in range(cfg.J):
            m = sample_mask(g_te, observed, cfg, rng, require_hidden=False)
            samples = next_label_samples(
                source, predicted, cfg.K, g_te.num_nodes, g_te.num_classes, iteration - 1, rng
            )
            z = mc_embedding(model, g_te, y_l, m, samples)
            total = z if total is None else total + z
        embedding = total / cfg.J
        predicted = predict_probs(model, embedding)
        out.embeddings.append(embedding)
        out.iteration_probs.append(predicted)
        logger.debug("Inference iteration finished", iteration=iteration, label_source=source.value)

    out.probs = predicted
    out.predictions = predict_classes(predicted)
    return out


def format_predictions(result: InferenceResult, nodes: Optional[Sequence[int]] = None) -> List[str]:
    """Prediction lines ``node<TAB>argmax<TAB>p_0,...,p_{C-1}``."""
    nodes = range(result.probs.shape[0]) if nodes is None else nodes
    return [
        f"{v}\t{int(result.predictions[v])}\t" + ",".join(repr(float(p)) for p in result.probs[v])
        for v in nodes
    ]
