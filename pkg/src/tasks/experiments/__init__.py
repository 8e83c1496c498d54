"""
Experiment tasks: one paired trial per task.
"""

from .trial import run_trial

__all__ = [
    'run_trial'
]
