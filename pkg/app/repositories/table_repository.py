"""Repository for comma-separated field and trace tables."""

import csv
import io
import logging
from pathlib import Path
from typing import Any, Dict, List

from app.schemas.report import significant
from .base import BaseRepository

logger = logging.getLogger('vortexlab_table_repository')

Rows = List[Dict[str, Any]]


def _columns(rows: Rows) -> List[str]:
    """Union of row keys in first-seen order."""
    columns: List[str] = []
    for row in rows:
        for key in row:
            if key not in columns:
                columns.append(key)
    return columns


class TableRepository(BaseRepository[Rows]):
    """One row per node or iterate, header row naming the columns."""

    def serialize(self, entity: Rows) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=_columns(entity), lineterminator="\n")
        writer.writeheader()
        for row in entity:
            writer.writerow(significant(row))
        return buffer.getvalue()

    def deserialize(self, text: str) -> Rows:
        return [dict(row) for row in csv.DictReader(io.StringIO(text))]

    @staticmethod
    def table_path(report_path: Path, table: str) -> Path:
        """<report stem>.<table>.csv next to the report."""
        report_path = Path(report_path)
        return report_path.with_name(f"{report_path.stem}.{table}.csv")

    def save_tables(self, tables: Dict[str, Rows], report_path: Path) -> List[Path]:
        written = []
        for name in sorted(tables):
            path = self.save(tables[name], self.table_path(report_path, name))
            logger.debug(f"[TableRepository] Wrote {len(tables[name])} rows to {path}")
            written.append(path)
        return written
