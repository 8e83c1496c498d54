"""
Report, manifest and per-trial record documents. Every document carries a
``schema_version`` and round-trips through ``model_dump_json`` /
``model_validate_json``.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

from src.ai.collective import LabelSource
from .config import ExperimentConfig
from .stats import MeanWithError, PairedTTest

REPORT_SCHEMA_VERSION = 1


class TrialSeeds(BaseModel):
    split: int
    baseline: int
    collective: int
    inference: int


class IterationSummary(BaseModel):
    iteration: int
    steps: int
    best_step: int
    best_val_accuracy: Optional[float] = None
    final_loss: Optional[float] = None


class TrialArtifacts(BaseModel):
    trial: int
    split: str
    baseline_checkpoint: str
    checkpoints: Dict[str, List[str]] = Field(default_factory=dict, description="Per-iteration snapshots by variant")
    predictions: Dict[str, str] = Field(default_factory=dict)


class TrialRecord(BaseModel):
    trial: int
    seeds: TrialSeeds
    split_sizes: Dict[str, int]
    baseline_metric: float
    baseline_best_epoch: int
    collective_metric: float
    improvement: float
    collective_curve: List[float] = Field(default_factory=list, description="Test metric after each inference iteration")
    collective_history: List[IterationSummary] = Field(default_factory=list)
    ablation_metrics: Dict[str, float] = Field(default_factory=dict)
    artifacts: Optional[TrialArtifacts] = None


class ComparisonSummary(BaseModel):
    """One variant against the baseline over paired trials."""

    variant: str
    metric: MeanWithError
    improvement: MeanWithError
    improvements: List[float]
    t_test: Optional[PairedTTest] = None
    note: Optional[str] = None


class TrialReport(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    name: str
    reproducible: bool
    config: ExperimentConfig
    metric: str
    trials: List[TrialRecord]
    baseline: MeanWithError
    collective: ComparisonSummary
    ablations: Dict[str, ComparisonSummary] = Field(default_factory=dict)


class RunManifest(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    name: str
    config: ExperimentConfig
    report: str
    label_sources: Dict[str, LabelSource]
    trials: List[TrialArtifacts]


class CheckResult(BaseModel):
    name: str
    passed: bool
    detail: Dict[str, Any] = Field(default_factory=dict)


class ExpressivenessReport(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    seeds: List[int]
    checks: List[CheckResult]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class EvaluationReport(BaseModel):
    schema_version: int = REPORT_SCHEMA_VERSION
    trial: int
    variant: str
    metric: str
    value: float
    predictions: str
