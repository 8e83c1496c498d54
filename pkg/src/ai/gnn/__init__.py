"""
Component GNNs (GCN, GraphSAGE-mean), the softmax readout and baseline training.
"""

from .model import (
    ModelKind,
    ModelState,
    glorot_uniform,
    predict_probs,
    predict_classes,
    readout_logits,
    readout_backward,
)
from .registry import ArchitectureRegistry, create_model, forward, backward
from .architectures import GCNArchitecture, SAGEArchitecture, EVAL_SAMPLING_SEED
from .training import EpochRecord, TrainingHistory, optimizer_step, eval_probs, train_baseline
from .checkpoint import ModelCheckpoint, save_checkpoint, load_checkpoint

__all__ = [
    "ModelKind",
    "ModelState",
    "glorot_uniform",
    "predict_probs",
    "predict_classes",
    "readout_logits",
    "readout_backward",
    "ArchitectureRegistry",
    "create_model",
    "forward",
    "backward",
    "GCNArchitecture",
    "SAGEArchitecture",
    "EVAL_SAMPLING_SEED",
    "EpochRecord",
    "TrainingHistory",
    "optimizer_step",
    "eval_probs",
    "train_baseline",
    "ModelCheckpoint",
    "save_checkpoint",
    "load_checkpoint",
]
