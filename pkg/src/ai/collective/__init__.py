"""
Collective learning around a component GNN: masks, label sampling, Monte
Carlo averaged training and inference, and the ablation variants.
"""

from .config import CLConfig, LabelSource, Redraw, Scenario
from .masks import MaskMatrix, sample_mask
from .labels import LabelSampleSet, build_input, draw_label_samples, uniform_probs
from .estimator import (
    SurrogateBound,
    exhaustive_embedding_moments,
    exhaustive_expected_embedding,
    label_probabilities,
    mc_backward,
    mc_embedding,
    mc_forward,
    next_label_samples,
    sample_predicted_labels,
    surrogate_bound,
)
from .training import (
    CollectiveHistory,
    CollectiveTrainingResult,
    IterationRecord,
    StepRecord,
    ablate_true_labels_only,
    ablate_uniform_labels,
    cl_train,
    deterministic_propagation_variant,
)
from .inference import InferenceResult, cl_infer, format_predictions

__all__ = [
    "CLConfig",
    "LabelSource",
    "Redraw",
    "Scenario",
    "MaskMatrix",
    "sample_mask",
    "LabelSampleSet",
    "build_input",
    "draw_label_samples",
    "uniform_probs",
    "SurrogateBound",
    "exhaustive_embedding_moments",
    "exhaustive_expected_embedding",
    "label_probabilities",
    "mc_backward",
    "mc_embedding",
    "mc_forward",
    "next_label_samples",
    "sample_predicted_labels",
    "surrogate_bound",
    "CollectiveHistory",
    "CollectiveTrainingResult",
    "IterationRecord",
    "StepRecord",
    "ablate_true_labels_only",
    "ablate_uniform_labels",
    "cl_train",
    "deterministic_propagation_variant",
    "InferenceResult",
    "cl_infer",
    "format_predictions",
]
