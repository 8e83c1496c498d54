"""
Experiment-level configuration models.
"""

from pathlib import Path
from typing import List, Literal, Optional

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from src.ai.collective import CLConfig, Scenario
from src.ai.gnn import ModelKind
from src.ai.graph import Graph, load_cora, load_graph
from src.ai.graph.sampling import TEST_LABEL_MODES
from .synthetic import synth_homophily

Metric = Literal["accuracy", "balanced_accuracy"]
Ablation = Literal["uniform", "true_only"]


class DatasetSpec(BaseModel):
    """Graph read from disk: the three tab-separated files, or the Cora distribution."""

    format: Literal["tsv", "cora"] = "tsv"
    edge_path: Optional[str] = None
    feature_path: Optional[str] = None
    label_path: Optional[str] = None
    content_path: Optional[str] = None
    cites_path: Optional[str] = None
    num_classes: Optional[int] = None

    @model_validator(mode="after")
    def validate_paths(self):
        required = ("edge_path", "feature_path", "label_path") if self.format == "tsv" else ("content_path", "cites_path")
        missing = [name for name in required if not getattr(self, name)]
        if missing:
            raise ValueError(f"format {self.format} requires {', '.join(missing)}")
        return self

    def load(self) -> Graph:
        if self.format == "cora":
            return load_cora(self.content_path, self.cites_path)
        return load_graph(self.edge_path, self.feature_path, self.label_path, num_classes=self.num_classes)


class SyntheticSpec(BaseModel):
    n: int = 600
    num_classes: int = 3
    communities: Optional[int] = None
    homophily: float = 0.9
    avg_degree: float = 10.0
    feature_dim: int = 16
    feature_noise: Optional[float] = Field(default=None, description="None makes features uninformative")
    imbalance: float = Field(default=1.0, description="Size ratio between consecutive communities")

    @field_validator("n", "num_classes", "feature_dim")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("homophily")
    @classmethod
    def validate_homophily(cls, v):
        if not (0.5 <= v <= 1.0):
            raise ValueError("homophily must lie in [0.5, 1]")
        return v

    @field_validator("imbalance")
    @classmethod
    def validate_imbalance(cls, v):
        if v < 1.0:
            raise ValueError("imbalance must be >= 1")
        return v

    @property
    def labels_imbalanced(self) -> bool:
        return self.imbalance > 1.0

    def generate(self, rng: np.random.Generator) -> Graph:
        return synth_homophily(
            self.n,
            self.num_classes,
            self.communities,
            self.homophily,
            self.feature_noise,
            rng,
            avg_degree=self.avg_degree,
            feature_dim=self.feature_dim,
            imbalance=self.imbalance,
        )


class SplitConfig(BaseModel):
    train_size: int = 30
    test_size: int = 150
    val_size: Optional[int] = Field(default=None, description="Defaults to test_size")
    test_label_rate: float = Field(default=0.5, description="Share of the test region with observed labels")
    test_label_mode: str = "component"

    @field_validator("train_size", "test_size")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @field_validator("test_label_rate")
    @classmethod
    def validate_rate(cls, v):
        if not (0.0 <= v < 1.0):
            raise ValueError("test_label_rate must lie in [0, 1)")
        return v

    @field_validator("test_label_mode")
    @classmethod
    def validate_mode(cls, v):
        if v not in TEST_LABEL_MODES:
            raise ValueError(f"test_label_mode must be one of {TEST_LABEL_MODES}")
        return v


class ExperimentConfig(BaseModel):
    name: str = "experiment"
    dataset: Optional[DatasetSpec] = None
    synthetic: Optional[SyntheticSpec] = None
    model: ModelKind = ModelKind.GCN
    cl: CLConfig = Field(default_factory=CLConfig)
    split: SplitConfig = Field(default_factory=SplitConfig)
    trials: int = 5
    metric: Metric = "accuracy"
    seed: Optional[int] = None
    output_dir: Optional[str] = None
    baseline_epochs: int = 200
    baseline_patience: Optional[int] = None
    collective: bool = True
    ablations: List[Ablation] = Field(default_factory=list)

    @field_validator("trials", "baseline_epochs")
    @classmethod
    def validate_positive(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @model_validator(mode="after")
    def validate_experiment(self):
        if (self.dataset is None) == (self.synthetic is None):
            raise ValueError("exactly one of dataset and synthetic must be given")
        if self.synthetic is not None and self.synthetic.labels_imbalanced and self.metric != "balanced_accuracy":
            raise ValueError("metric must be balanced_accuracy for imbalanced synthetic labels")
        if "true_only" in self.ablations and self.cl.scenario != Scenario.TEST_PARTIAL:
            raise ValueError("ablation true_only requires cl.scenario test_partial")
        return self

    @property
    def scenario(self) -> Scenario:
        return self.cl.scenario

    @property
    def test_label_rate(self) -> float:
        """Observed test labels exist only in scenario test_partial."""
        return self.split.test_label_rate if self.scenario == Scenario.TEST_PARTIAL else 0.0

    def resolved_output_dir(self, default: str) -> Path:
        return Path(self.output_dir or default)
