"""
Configuration management for collective-gnn.
"""

from .config import settings, Settings

__all__ = [
    'settings',
    'Settings'
]
