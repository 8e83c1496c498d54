"""
Classification metrics over an evaluation node set.
"""

from typing import Sequence

import numpy as np


def metric_accuracy(preds: Sequence[int], truth: Sequence[int], eval_set: Sequence[int]) -> float:
    """Fraction of ``eval_set`` nodes whose prediction equals the truth."""
    nodes = np.asarray(eval_set, dtype=np.int64)
    if nodes.size == 0:
        return float("nan")
    preds = np.asarray(preds)
    truth = np.asarray(truth)
    return float(np.mean(preds[nodes] == truth[nodes]))


def metric_balanced_accuracy(preds: Sequence[int], truth: Sequence[int], eval_set: Sequence[int]) -> float:
    """Mean per-class recall over the classes present in the truth of ``eval_set``."""
    nodes = np.asarray(eval_set, dtype=np.int64)
    if nodes.size == 0:
        return float("nan")
    preds = np.asarray(preds)[nodes]
    truth = np.asarray(truth)[nodes]
    recalls = [np.mean(preds[truth == c] == c) for c in np.unique(truth)]
    return float(np.mean(recalls))


METRICS = {
    "accuracy": metric_accuracy,
    "balanced_accuracy": metric_balanced_accuracy,
}
