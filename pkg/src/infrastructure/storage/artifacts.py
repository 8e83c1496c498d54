from pathlib import Path
from typing import List, Optional, Type, TypeVar, Union

from pydantic import BaseModel

from src.ai.gnn import ModelState, load_checkpoint, save_checkpoint
from src.ai.graph import SplitSpec, load_split, save_split
from src.config.config import settings
from src.utils.logger import logger

ModelT = TypeVar("ModelT", bound=BaseModel)


class ArtifactStore:
    """Service for run artifacts kept under one local directory"""

    def __init__(self, root: Optional[Union[str, Path]] = None):
        """Initialize the store, creating the root directory"""
        self.root = Path(root or settings.OUTPUT_DIR)
        self.root.mkdir(parents=True, exist_ok=True)

        logger.info("Artifact store initialized", root=str(self.root))

    def path(self, relative: str) -> Path:
        return self.root / relative

    def _prepare(self, relative: str) -> Path:
        target = self.path(relative)
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def save_model(self, document: BaseModel, relative: str) -> str:
        """
        Write a pydantic document as indented JSON

        Args:
            document: Report, manifest or certificate
            relative: Path below the store root

        Returns:
            The relative path written
        """
        try:
            self._prepare(relative).write_text(document.model_dump_json(indent=2) + "\n", encoding="utf-8")
            logger.info("Artifact written", path=relative, kind=type(document).__name__)
            return relative
        except OSError as e:
            logger.error(
                "Failed to write artifact",
                error_type=type(e).__name__,
                error_message=str(e),
                path=relative
            )
            raise

    def load_model(self, model_cls: Type[ModelT], relative: str) -> ModelT:
        """
        Read and validate a JSON document

        Args:
            model_cls: Pydantic model to validate against
            relative: Path below the store root

        Returns:
            Validated document
        """
        try:
            return model_cls.model_validate_json(self.path(relative).read_text(encoding="utf-8"))
        except OSError as e:
            logger.error(
                "Failed to read artifact",
                error_type=type(e).__name__,
                error_message=str(e),
                path=relative
            )
            raise

    def save_checkpoint(self, model: ModelState, relative: str) -> str:
        save_checkpoint(model, self._prepare(relative))
        logger.debug("Checkpoint written", path=relative, kind=model.kind)
        return relative

    def load_checkpoint(self, relative: str) -> ModelState:
        return load_checkpoint(self.path(relative))

    def save_split(self, split: SplitSpec, relative: str) -> str:
        save_split(split, self._prepare(relative))
        return relative

    def load_split(self, relative: str) -> SplitSpec:
        return load_split(self.path(relative))

    def write_lines(self, lines: List[str], relative: str) -> str:
        """Write text lines, e.g. a prediction file"""
        self._prepare(relative).write_text("".join(line + "\n" for line in lines), encoding="utf-8")
        logger.info("Lines written", path=relative, count=len(lines))
        return relative

    def exists(self, relative: str) -> bool:
        return self.path(relative).exists()
