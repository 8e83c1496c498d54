from enum import Enum
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator


class Scenario(str, Enum):
    TEST_UNLABELED = "test_unlabeled"
    TEST_PARTIAL = "test_partial"


class Redraw(str, Enum):
    STEP = "step"
    ITERATION = "iteration"


class LabelSource(str, Enum):
    """Where the label channel of non-visible nodes comes from."""

    PREDICTED = "predicted"          # categorical draws from the previous iteration
    UNIFORM = "uniform"              # uniform random classes
    TRUE_ONLY = "true_only"          # nothing; only visible true labels
    DETERMINISTIC = "deterministic"  # the probability rows themselves


class CLConfig(BaseModel):
    """Hyperparameters of collective training and inference."""

    K: int = Field(default=10, description="Label samples per gradient step")
    T: int = Field(default=10, description="Outer iterations")
    J: int = Field(default=100, description="Gradient steps per iteration (and masks per inference iteration)")
    scenario: Scenario = Scenario.TEST_PARTIAL
    mask_rate: float = Field(default=0.5, description="Probability that a labeled node's label is hidden")
    lr: float = 0.01
    weight_decay: float = 5e-4
    dropout_p: float = 0.5
    hidden_dim: int = 16
    seed: Optional[int] = None
    clip_norm: Optional[float] = 5.0
    redraw: Redraw = Redraw.STEP
    early_stop_patience: Optional[int] = None
    sample_size: int = Field(default=5, description="GraphSAGE neighbor sample size")

    @field_validator("K", "T", "J", "hidden_dim", "sample_size")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("dropout_p")
    @classmethod
    def validate_dropout(cls, v):
        if not (0.0 <= v < 1.0):
            raise ValueError("dropout_p must lie in [0, 1)")
        return v

    @field_validator("lr")
    @classmethod
    def validate_lr(cls, v):
        if v <= 0:
            raise ValueError("lr must be positive")
        return v

    @field_validator("weight_decay")
    @classmethod
    def validate_weight_decay(cls, v):
        if v < 0:
            raise ValueError("weight_decay must be non-negative")
        return v

    @field_validator("early_stop_patience")
    @classmethod
    def validate_patience(cls, v):
        if v is not None and v < 1:
            raise ValueError("early_stop_patience must be at least 1 when set")
        return v

    @model_validator(mode="after")
    def validate_mask_rate(self):
        if self.scenario == Scenario.TEST_PARTIAL and not (0.0 < self.mask_rate < 1.0):
            raise ValueError("mask_rate must lie in (0, 1) for scenario test_partial")
        if not (0.0 <= self.mask_rate < 1.0):
            raise ValueError("mask_rate must lie in [0, 1)")
        return self
