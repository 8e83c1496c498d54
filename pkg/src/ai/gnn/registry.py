import time
from typing import Any, Dict, Optional, Type

import numpy as np

from src.ai.common import ConfigurationError, Param
from src.utils.logger import logger
from .model import ModelState, glorot_uniform


class ArchitectureRegistry:
    """
    Registry of component GNN architectures, keyed by model kind.

    Architectures register themselves with ``@ArchitectureRegistry.register``;
    every architecture exposes ``init_layers``, ``forward`` and ``backward``.
    One instance per kind is created lazily and reused.

    Registry structure: {kind: {architecture: instance, metadata: info}}
    """

    _classes: Dict[str, Type] = {}
    _cache: Dict[str, Dict[str, Any]] = {}

    @classmethod
    def register(cls, architecture_cls: Type) -> Type:
        kind = getattr(architecture_cls, "kind", None)
        if not kind:
            raise ConfigurationError(f"{architecture_cls.__name__} does not declare a kind")
        cls._classes[kind] = architecture_cls
        cls._cache.pop(kind, None)
        return architecture_cls

    @classmethod
    def get(cls, kind: str):
        """
        Get the architecture instance for ``kind``.

        Args:
            kind: Registered model kind (gcn, sage, ...)

        Returns:
            Shared architecture instance
        """
        kind = getattr(kind, "value", kind)
        if kind not in cls._cache:
            if kind not in cls._classes:
                raise ConfigurationError(
                    f"Unknown model kind: {kind!r}; registered kinds are {sorted(cls._classes)}"
                )
            logger.debug("Creating architecture instance", kind=kind)
            cls._cache[kind] = {
                "architecture": cls._classes[kind](),
                "metadata": {"kind": kind, "created_at": time.time(), "use_count": 0},
            }
        cls._cache[kind]["metadata"]["use_count"] += 1
        return cls._cache[kind]["architecture"]

    @classmethod
    def kinds(cls):
        return sorted(cls._classes)

    @classmethod
    def clear_cache(cls):
        cls._cache.clear()

    @classmethod
    def get_registry_info(cls) -> dict:
        return {
            "registered_kinds": cls.kinds(),
            "instances": {
                kind: {"use_count": data["metadata"]["use_count"]}
                for kind, data in cls._cache.items()
            },
        }


def create_model(
    kind: str,
    input_dim: int,
    num_classes: int,
    rng: np.random.Generator,
    hidden_dim: int = 16,
    dropout_p: float = 0.5,
    sample_size: int = 5,
) -> ModelState:
    """
    Build a freshly initialized ModelState for a registered architecture.

    Layer weights and the readout matrix are Glorot-uniform; the readout bias
    starts at zero.
    """
    architecture = ArchitectureRegistry.get(kind)
    layers = architecture.init_layers(input_dim, hidden_dim, rng)
    return ModelState(
        kind=architecture.kind,
        input_dim=input_dim,
        hidden_dim=hidden_dim,
        num_classes=num_classes,
        layer_params=layers,
        readout_w=Param.create(glorot_uniform(hidden_dim, num_classes, rng)),
        readout_b=Param.create(np.zeros((1, num_classes))),
        dropout_p=dropout_p,
        sample_size=sample_size,
    )


def forward(model: ModelState, g, x, training: bool, rng: Optional[np.random.Generator] = None):
    """Run the model's architecture; returns ``(z, cache)``."""
    return ArchitectureRegistry.get(model.kind).forward(model, g, x, training, rng)


def backward(model: ModelState, cache, dz):
    """Accumulate layer gradients for an upstream gradient ``dz`` on the embedding."""
    ArchitectureRegistry.get(model.kind).backward(model, cache, dz)
