"""
JSON model checkpoints: kind, dimensions and every parameter matrix with its shape.
"""

from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
from pydantic import BaseModel, model_validator

from src.ai.common import Param
from .model import ModelState

CHECKPOINT_SCHEMA_VERSION = 1


class MatrixRecord(BaseModel):
    shape: Tuple[int, int]
    values: List[float]

    @model_validator(mode="after")
    def check_size(self):
        if self.shape[0] * self.shape[1] != len(self.values):
            raise ValueError(f"matrix of shape {self.shape} needs {self.shape[0] * self.shape[1]} values")
        return self

    @classmethod
    def from_array(cls, array: np.ndarray) -> "MatrixRecord":
        return cls(shape=array.shape, values=array.reshape(-1).tolist())

    def to_array(self) -> np.ndarray:
        return np.array(self.values, dtype=np.float64).reshape(self.shape)


class ModelCheckpoint(BaseModel):
    schema_version: int = CHECKPOINT_SCHEMA_VERSION
    kind: str
    input_dim: int
    hidden_dim: int
    num_classes: int
    dropout_p: float
    sample_size: int
    layers: List[MatrixRecord]
    readout_w: MatrixRecord
    readout_b: MatrixRecord

    @classmethod
    def from_model(cls, model: ModelState) -> "ModelCheckpoint":
        return cls(
            kind=model.kind,
            input_dim=model.input_dim,
            hidden_dim=model.hidden_dim,
            num_classes=model.num_classes,
            dropout_p=model.dropout_p,
            sample_size=model.sample_size,
            layers=[MatrixRecord.from_array(p.value) for p in model.layer_params],
            readout_w=MatrixRecord.from_array(model.readout_w.value),
            readout_b=MatrixRecord.from_array(model.readout_b.value),
        )

    def to_model(self) -> ModelState:
        """Rebuild the model; optimizer moments start at zero."""
        return ModelState(
            kind=self.kind,
            input_dim=self.input_dim,
            hidden_dim=self.hidden_dim,
            num_classes=self.num_classes,
            layer_params=[Param.create(record.to_array()) for record in self.layers],
            readout_w=Param.create(self.readout_w.to_array()),
            readout_b=Param.create(self.readout_b.to_array()),
            dropout_p=self.dropout_p,
            sample_size=self.sample_size,
        )


def save_checkpoint(model: ModelState, path: Union[str, Path]):
    Path(path).write_text(ModelCheckpoint.from_model(model).model_dump_json(), encoding="utf-8")


def load_checkpoint(path: Union[str, Path]) -> ModelState:
    return ModelCheckpoint.model_validate_json(Path(path).read_text(encoding="utf-8")).to_model()
