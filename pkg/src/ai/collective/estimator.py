"""
Monte Carlo averaged embeddings over label samples, their backward pass, and
the recursive label sampler.
"""

import itertools
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel

from src.ai.common import Matrix, SizeBoundError, masked_cross_entropy
from src.ai.gnn import ModelState, backward, forward, predict_probs
from src.ai.graph import Graph
from .config import LabelSource
from .labels import LabelSampleSet, build_input, draw_label_samples, uniform_probs
from .masks import MaskMatrix

MAX_ENUMERATED_ASSIGNMENTS = 4096


def mc_forward(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    samples: LabelSampleSet,
    training: bool,
    rng: Optional[np.random.Generator],
) -> Tuple[Matrix, List[dict]]:
    """
    One forward pass per label sample; returns the mean embedding and the
    per-sample caches.

    The zero base repeats a single input, so it gets a single pass: the
    first iteration then trains exactly like a plain model on ``[X ‖ Y_L⊙M]``.
    """
    draws = samples.samples[:1] if samples.zero_base else samples.samples
    total = None
    caches = []
    for sample in draws:
        z, cache = forward(model, g, build_input(g, y_l, sample, m), training, rng)
        total = z if total is None else total + z
        caches.append(cache)
    return total / len(draws), caches


def mc_backward(model: ModelState, caches: List[dict], dz_mean: Matrix):
    """Backward through the average: each sample's pass receives ``dz_mean / K``, in sample order."""
    share = dz_mean / len(caches)
    for cache in caches:
        backward(model, cache, share)


def mc_embedding(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    samples: LabelSampleSet,
    training: bool = False,
    rng: Optional[np.random.Generator] = None,
) -> Matrix:
    """Arithmetic mean of the K embeddings obtained by substituting each sample into the input."""
    return mc_forward(model, g, y_l, m, samples, training, rng)[0]


def label_probabilities(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    prev: LabelSampleSet,
) -> Matrix:
    """Readout probabilities of a frozen model on the eval-mode averaged embedding."""
    return predict_probs(model, mc_embedding(model, g, y_l, m, prev))


def sample_predicted_labels(
    model: ModelState,
    g: Graph,
    m: MaskMatrix,
    prev: LabelSampleSet,
    K: int,
    rng: np.random.Generator,
    y_l: Optional[Matrix] = None,
    source_iteration: Optional[int] = None,
) -> LabelSampleSet:
    """
    Draw K label matrices from a frozen model conditioned on mask ``m`` and the
    earlier sample set ``prev``.

    ``y_l`` defaults to the one-hot labels of the nodes visible under ``m``.
    """
    if y_l is None:
        y_l = g.label_onehot(m.visible_nodes)
    probs = label_probabilities(model, g, y_l, m, prev)
    iteration = prev.source_iteration + 1 if source_iteration is None else source_iteration
    return next_label_samples(LabelSource.PREDICTED, probs, K, g.num_nodes, g.num_classes, iteration, rng)


def next_label_samples(
    source: LabelSource,
    probs: Optional[Matrix],
    K: int,
    num_nodes: int,
    num_classes: int,
    source_iteration: int,
    rng: np.random.Generator,
) -> LabelSampleSet:
    """
    Build the label channel set for one step of a collective variant.

    ``probs`` are the previous iteration's class probabilities; ``None``
    (first iteration) or the true-labels-only variant yield the zero base.
    """
    if probs is None or source == LabelSource.TRUE_ONLY:
        return LabelSampleSet.zeros(1 if source == LabelSource.DETERMINISTIC else K, num_nodes, num_classes)
    if source == LabelSource.DETERMINISTIC:
        return LabelSampleSet(probs[None, :, :], source_iteration=source_iteration, probabilistic=True)
    if source == LabelSource.UNIFORM:
        probs = uniform_probs(num_nodes, num_classes)
    return LabelSampleSet(draw_label_samples(probs, K, rng), source_iteration=source_iteration)


class SurrogateBound(BaseModel):
    """Single-sample losses against the loss at their mean embedding."""

    mean_sample_loss: float
    mean_embedding_loss: float
    standard_error: float

    @property
    def holds(self) -> bool:
        return self.mean_sample_loss >= self.mean_embedding_loss - 3.0 * self.standard_error


def surrogate_bound(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    samples: LabelSampleSet,
    targets: Matrix,
    weights: np.ndarray,
) -> SurrogateBound:
    """
    Compare the mean of per-sample losses with the loss of the mean embedding.

    The readout cross-entropy is convex in the embedding, so the first is an
    upper bound of the second in expectation.
    """
    zs = [forward(model, g, build_input(g, y_l, sample, m), False)[0] for sample in samples.samples]
    losses = np.array([masked_cross_entropy(predict_probs(model, z), targets, weights)[0] for z in zs])
    mean_z = sum(zs) / len(zs)
    mean_loss, _ = masked_cross_entropy(predict_probs(model, mean_z), targets, weights)
    error = float(losses.std(ddof=1) / np.sqrt(losses.size)) if losses.size > 1 else 0.0
    return SurrogateBound(
        mean_sample_loss=float(losses.mean()),
        mean_embedding_loss=mean_loss,
        standard_error=error,
    )


def exhaustive_embedding_moments(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    probs: Matrix,
) -> Tuple[Matrix, Matrix]:
    """
    Exact mean and variance of the eval-mode embedding over every label
    assignment drawn independently per node from the rows of ``probs``.
    """
    n, num_classes = probs.shape
    if num_classes ** n > MAX_ENUMERATED_ASSIGNMENTS:
        raise SizeBoundError(
            f"{num_classes}^{n} label assignments exceed the enumeration bound {MAX_ENUMERATED_ASSIGNMENTS}"
        )
    expected = np.zeros((n, model.hidden_dim))
    second = np.zeros_like(expected)
    rows = np.arange(n)
    for assignment in itertools.product(range(num_classes), repeat=n):
        classes = np.array(assignment)
        weight = float(np.prod(probs[rows, classes]))
        if weight == 0.0:
            continue
        yhat = np.zeros((n, num_classes))
        yhat[rows, classes] = 1.0
        z, _ = forward(model, g, build_input(g, y_l, yhat, m), False)
        expected += weight * z
        second += weight * z * z
    return expected, np.maximum(second - expected * expected, 0.0)


def exhaustive_expected_embedding(
    model: ModelState,
    g: Graph,
    y_l: Matrix,
    m: MaskMatrix,
    probs: Matrix,
) -> Matrix:
    return exhaustive_embedding_moments(model, g, y_l, m, probs)[0]
