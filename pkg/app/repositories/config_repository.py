"""Repository for problem configuration files."""

import logging
from pathlib import Path
from typing import Optional

from app.core.exceptions import ValidationException
from app.schemas.problem import ProblemConfig, parse_config
from .base import BaseRepository

logger = logging.getLogger('vortexlab_config_repository')


class ConfigRepository(BaseRepository[ProblemConfig]):
    """Reads JSON problem configs; writes them back in canonical form."""

    def serialize(self, entity: ProblemConfig) -> str:
        return entity.canonical_json() + "\n"

    def deserialize(self, text: str) -> ProblemConfig:
        return parse_config(text)

    def load(self, path: Path, preset: Optional[str] = None) -> ProblemConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding=self.encoding)
        except OSError as e:
            raise ValidationException(f"cannot read config {path}: {e.strerror or str(e)}")
        logger.debug(f"[ConfigRepository] Loaded {path}")
        return parse_config(text, preset)
