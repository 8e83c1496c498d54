"""
Storage infrastructure: local run artifacts.
"""

from .artifacts import ArtifactStore

__all__ = [
    "ArtifactStore"
]
