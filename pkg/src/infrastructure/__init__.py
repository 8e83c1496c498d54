"""
Infrastructure layer: Celery dispatch and artifact storage.
"""
