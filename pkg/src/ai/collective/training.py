"""
Collective training: T outer iterations of J masked, Monte Carlo averaged
gradient steps. Iteration t feeds label samples drawn from the frozen best
snapshot of iteration t-1; iteration 1 feeds the zero base.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.ai.common import ConfigurationError, DegenerateBatchError, Matrix, masked_cross_entropy
from src.ai.common.metrics import metric_accuracy
from src.ai.gnn import (
    ModelState,
    create_model,
    optimizer_step,
    predict_classes,
    predict_probs,
    readout_backward,
)
from src.ai.graph import Graph, SplitSpec
from src.utils.logger import logger
from .config import CLConfig, LabelSource, Redraw, Scenario
from .estimator import (
    label_probabilities,
    mc_backward,
    mc_embedding,
    mc_forward,
    next_label_samples,
    sample_predicted_labels,
)
from .labels import LabelSampleSet, uniform_probs
from .masks import MaskMatrix, sample_mask


class StepRecord(BaseModel):
    step: int
    loss: float
    train_accuracy: float
    val_accuracy: Optional[float] = None
    grad_norm: float
    targets: int


class IterationRecord(BaseModel):
    iteration: int
    steps: List[StepRecord] = Field(default_factory=list)
    best_step: int = 0
    best_val_accuracy: Optional[float] = None
    stopped_early: bool = False


class CollectiveHistory(BaseModel):
    kind: str
    label_source: LabelSource
    scenario: Scenario
    iterations: List[IterationRecord] = Field(default_factory=list)


@dataclass(eq=False)
class CollectiveTrainingResult:
    """Best snapshot of every iteration (inference replays them in order) and the history."""

    kind: str
    config: CLConfig
    label_source: LabelSource
    models: List[ModelState]
    history: CollectiveHistory

    @property
    def final_model(self) -> ModelState:
        return self.models[-1]

    @property
    def scenario(self) -> Scenario:
        return self.config.scenario


def _draw_samples(
    label_source: LabelSource,
    iteration: int,
    sampler: Optional[ModelState],
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    conditioning: LabelSampleSet,
    K: int,
    rng: np.random.Generator,
) -> LabelSampleSet:
    """Label channel set of one step; iteration 1 and the true-labels-only variant get the zero base."""
    if iteration > 1 and label_source == LabelSource.PREDICTED:
        return sample_predicted_labels(sampler, g, m, conditioning, K, rng, y_l=y_l, source_iteration=iteration - 1)
    probs = None
    if iteration > 1 and label_source == LabelSource.DETERMINISTIC:
        probs = label_probabilities(sampler, g, y_l, m, conditioning)
    elif iteration > 1 and label_source == LabelSource.UNIFORM:
        probs = uniform_probs(g.num_nodes, g.num_classes)
    return next_label_samples(label_source, probs, K, g.num_nodes, g.num_classes, iteration - 1, rng)


def _target_weights(labeled: np.ndarray, m: MaskMatrix) -> np.ndarray:
    weights = np.zeros(m.num_nodes)
    weights[labeled] = m.complement[labeled]
    return weights


def _train_iteration(
    model: ModelState,
    g: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    label_source: LabelSource,
    iteration: int,
    sampler: Optional[ModelState],
    conditioning: LabelSampleSet,
    rng: np.random.Generator,
) -> Tuple[ModelState, LabelSampleSet, IterationRecord]:
    labeled = np.asarray(split.train_labeled, dtype=np.int64)
    y_l = g.label_onehot(labeled)

    record = IterationRecord(iteration=iteration)
    best, best_samples, best_score = model.clone(), conditioning, -np.inf
    samples = None

    for step in range(1, cfg.J + 1):
        m = sample_mask(g, labeled, cfg, rng)
        if samples is None or cfg.redraw == Redraw.STEP:
            samples = _draw_samples(label_source, iteration, sampler, g, y_l, m, conditioning, cfg.K, rng)

        weights = _target_weights(labeled, m)
        model.zero_grad()
        z, caches = mc_forward(model, g, y_l, m, samples, True, rng)
        loss, dlogits = masked_cross_entropy(predict_probs(model, z), y_l, weights)
        mc_backward(model, caches, readout_backward(model, z, dlogits))
        norm = optimizer_step(model, cfg.lr, cfg.weight_decay, cfg.clip_norm)

        preds = predict_classes(predict_probs(model, mc_embedding(model, g, y_l, m, samples)))
        step_record = StepRecord(
            step=step,
            loss=loss,
            train_accuracy=metric_accuracy(preds, g.labels, np.flatnonzero(weights)),
            val_accuracy=metric_accuracy(preds, g.labels, split.validation) if split.validation else None,
            grad_norm=norm,
            targets=int(weights.sum()),
        )
        record.steps.append(step_record)

        score = step_record.val_accuracy if step_record.val_accuracy is not None else float(step)
        if score > best_score:
            best_score = score
            best, best_samples = model.clone(), samples
            record.best_step = step
            record.best_val_accuracy = step_record.val_accuracy
        elif cfg.early_stop_patience and step - record.best_step >= cfg.early_stop_patience:
            record.stopped_early = True
            break

    return best, best_samples, record


def cl_train(
    base_kind: str,
    g_tr: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    rng: np.random.Generator,
    label_source: LabelSource = LabelSource.PREDICTED,
) -> CollectiveTrainingResult:
    """
    Train a collective model on ``g_tr``.

    Args:
        base_kind: Registered component architecture (gcn, sage)
        g_tr: Training graph
        split: Node sets; ``train_labeled`` supplies both visible labels and targets
        cfg: Collective hyperparameters
        rng: Generator for initialization, masks, label draws, dropout and neighbor sampling
        label_source: Variant of the label channel

    Returns:
        CollectiveTrainingResult holding one snapshot per iteration
    """
    label_source = LabelSource(label_source)
    if not split.train_labeled:
        raise DegenerateBatchError("cl_train needs at least one labeled training node")
    if label_source == LabelSource.TRUE_ONLY and cfg.scenario != Scenario.TEST_PARTIAL:
        raise ConfigurationError("the true-labels-only variant is defined for scenario test_partial only")
    split.check_against(g_tr)

    num_classes = g_tr.num_classes
    model = create_model(
        base_kind,
        g_tr.num_features + num_classes,
        num_classes,
        rng,
        hidden_dim=cfg.hidden_dim,
        dropout_p=cfg.dropout_p,
        sample_size=cfg.sample_size,
    )
    base_k = 1 if label_source == LabelSource.DETERMINISTIC else cfg.K
    conditioning = LabelSampleSet.zeros(base_k, g_tr.num_nodes, num_classes)
    history = CollectiveHistory(kind=model.kind, label_source=label_source, scenario=cfg.scenario)
    snapshots: List[ModelState] = []
    sampler = None

    for iteration in range(1, cfg.T + 1):
        best, best_samples, record = _train_iteration(
            model, g_tr, split, cfg, label_source, iteration, sampler, conditioning, rng
        )
        history.iterations.append(record)
        snapshots.append(best)
        sampler, conditioning = best, best_samples
        model = best.clone()
        logger.info(
            "Collective iteration finished",
            kind=model.kind,
            label_source=label_source.value,
            iteration=iteration,
            steps=len(record.steps),
            best_step=record.best_step,
            best_val_accuracy=record.best_val_accuracy,
            final_loss=record.steps[-1].loss if record.steps else None,
        )

    return CollectiveTrainingResult(
        kind=model.kind,
        config=cfg,
        label_source=label_source,
        models=snapshots,
        history=history,
    )


def ablate_uniform_labels(
    base_kind: str,
    g_tr: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    rng: np.random.Generator,
) -> CollectiveTrainingResult:
    """Collective training with uniformly random classes in place of predicted labels."""
    return cl_train(base_kind, g_tr, split, cfg, rng, label_source=LabelSource.UNIFORM)


def ablate_true_labels_only(
    base_kind: str,
    g_tr: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    rng: np.random.Generator,
) -> CollectiveTrainingResult:
    """Collective training whose label channel carries only the visible true labels."""
    return cl_train(base_kind, g_tr, split, cfg, rng, label_source=LabelSource.TRUE_ONLY)


def deterministic_propagation_variant(
    base_kind: str,
    g_tr: Graph,
    split: SplitSpec,
    cfg: CLConfig,
    rng: np.random.Generator,
) -> CollectiveTrainingResult:
    """Collective training that feeds probability rows instead of sampled labels."""
    return cl_train(base_kind, g_tr, split, cfg, rng, label_source=LabelSource.DETERMINISTIC)
