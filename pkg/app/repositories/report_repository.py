"""Repository for JSON command reports."""

import json
import logging
from pathlib import Path

from app.schemas.report import ReportEnvelope, emit_report
from .base import BaseRepository

logger = logging.getLogger('vortexlab_report_repository')


class ReportRepository(BaseRepository[ReportEnvelope]):

    def serialize(self, entity: ReportEnvelope) -> str:
        return emit_report(entity)

    def deserialize(self, text: str) -> ReportEnvelope:
        return ReportEnvelope.model_validate(json.loads(text))

    def save(self, entity: ReportEnvelope, path: Path) -> Path:
        path = super().save(entity, path)
        logger.info(f"[ReportRepository] Wrote {entity.command} report to {path}")
        return path
