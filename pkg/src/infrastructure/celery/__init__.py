"""
Celery infrastructure for trial dispatch.
"""

from .app import celery_app, check_redis_connection, auto_discover_tasks
from .routing import task_routes, QUEUE_CONFIGS

__all__ = [
    "celery_app",
    "check_redis_connection",
    "auto_discover_tasks",
    "task_routes",
    "QUEUE_CONFIGS"
]
