import time
from typing import Any, Dict

from celery import shared_task

from src.experiments.config import ExperimentConfig
from src.experiments.runner import execute_trial
from src.infrastructure.storage import ArtifactStore
from src.utils.logger import logger


@shared_task(name="tasks.experiments.run_trial", bind=True)
def run_trial(self, config_json: str, trial: int, output_root: str) -> Dict[str, Any]:
    """
    Run one paired baseline / collective trial.

    Args:
        config_json: Serialized ExperimentConfig (seed set)
        trial: Trial index
        output_root: Directory the trial artifacts are written below

    Returns:
        TrialRecord as a JSON-compatible dictionary
    """
    start_time = time.time()
    config = None

    try:
        config = ExperimentConfig.model_validate_json(config_json)
        record = execute_trial(config, trial, ArtifactStore(output_root))

        logger.info(
            "Trial task completed successfully",
            task_id=self.request.id,
            name=config.name,
            trial=trial,
            processing_time_seconds=round(time.time() - start_time, 2),
        )
        return record.model_dump(mode="json")

    except Exception as e:
        logger.error(
            "Trial task failed",
            task_id=self.request.id,
            name=config.name if config else None,
            trial=trial,
            error_type=type(e).__name__,
            error_message=str(e),
            processing_time_seconds=round(time.time() - start_time, 2),
        )
        # Trials are deterministic, retrying would fail the same way
        raise
