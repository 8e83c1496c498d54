"""
Celery tasks for collective-gnn.
"""
