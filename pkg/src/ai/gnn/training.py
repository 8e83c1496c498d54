"""
Full-graph training of a single (non-collective) model.
"""

from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field

from src.ai.common import (
    DegenerateBatchError,
    Matrix,
    adam_step,
    clip_grad_norm,
    masked_cross_entropy,
)
from src.ai.common.metrics import metric_accuracy
from src.ai.graph import Graph, SplitSpec
from src.utils.logger import logger
from .model import ModelState, predict_classes, predict_probs, readout_backward
from .registry import backward, forward


class EpochRecord(BaseModel):
    epoch: int
    loss: float
    train_accuracy: float
    val_accuracy: Optional[float] = None
    grad_norm: float


class TrainingHistory(BaseModel):
    epochs: List[EpochRecord] = Field(default_factory=list)
    best_epoch: int = 0
    best_val_accuracy: Optional[float] = None
    stopped_early: bool = False


def optimizer_step(model: ModelState, lr: float, weight_decay: float, clip_norm: Optional[float]) -> float:
    """Clip the accumulated gradients and apply one Adam update to every parameter."""
    norm = clip_grad_norm(model.parameters(), clip_norm)
    model.step_count += 1
    for param in model.parameters():
        adam_step(param, lr, weight_decay=weight_decay, step_index=model.step_count)
    return norm


def eval_probs(model: ModelState, g: Graph, x: Matrix) -> Matrix:
    z, _ = forward(model, g, x, training=False)
    return predict_probs(model, z)


def train_baseline(
    model: ModelState,
    g: Graph,
    split: SplitSpec,
    epochs: int,
    lr: float,
    weight_decay: float,
    early_stop_patience: Optional[int],
    rng: np.random.Generator,
    inputs: Optional[Matrix] = None,
    clip_norm: Optional[float] = 5.0,
) -> Tuple[ModelState, TrainingHistory]:
    """
    Train ``model`` with full-graph gradient steps on ``split.train_labeled``.

    Validation accuracy is tracked every epoch; the parameters of the best
    validation epoch are returned (the last epoch when there is no validation
    set). ``early_stop_patience`` epochs without improvement end training.

    Args:
        model: Model to train; updated in place
        g: Graph whose labels supply the targets
        split: Node sets of the trial
        epochs: Number of full-graph gradient steps
        lr: Adam learning rate
        weight_decay: Decoupled weight decay
        early_stop_patience: Epochs without validation improvement before stopping (None disables)
        rng: Generator for dropout and neighbor sampling
        inputs: Input matrix (defaults to the node features)
        clip_norm: Global gradient-norm threshold (None disables)

    Returns:
        Tuple of (best snapshot, training history)
    """
    if not split.train_labeled:
        raise DegenerateBatchError("train_baseline needs at least one labeled training node")
    split.check_against(g)

    x = g.features if inputs is None else inputs
    targets = g.label_onehot(split.train_labeled)
    weights = np.zeros(g.num_nodes)
    weights[split.train_labeled] = 1.0

    history = TrainingHistory()
    best = model.clone()
    best_score = -np.inf

    for epoch in range(1, epochs + 1):
        model.zero_grad()
        z, cache = forward(model, g, x, training=True, rng=rng)
        probs = predict_probs(model, z)
        loss, dlogits = masked_cross_entropy(probs, targets, weights)
        backward(model, cache, readout_backward(model, z, dlogits))
        norm = optimizer_step(model, lr, weight_decay, clip_norm)

        preds = predict_classes(eval_probs(model, g, x))
        record = EpochRecord(
            epoch=epoch,
            loss=loss,
            train_accuracy=metric_accuracy(preds, g.labels, split.train_labeled),
            val_accuracy=metric_accuracy(preds, g.labels, split.validation) if split.validation else None,
            grad_norm=norm,
        )
        history.epochs.append(record)

        score = record.val_accuracy if record.val_accuracy is not None else float(epoch)
        if score > best_score:
            best_score = score
            best = model.clone()
            history.best_epoch = epoch
            history.best_val_accuracy = record.val_accuracy
        elif early_stop_patience and epoch - history.best_epoch >= early_stop_patience:
            history.stopped_early = True
            logger.debug("Baseline early stop", epoch=epoch, best_epoch=history.best_epoch)
            break

    logger.info(
        "Baseline training finished",
        kind=model.kind,
        epochs=len(history.epochs),
        best_epoch=history.best_epoch,
        best_val_accuracy=history.best_val_accuracy,
    )
    return best, history
