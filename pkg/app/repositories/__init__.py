"""Repository layer for configs, reports and tables."""

from .config_repository import ConfigRepository
from .report_repository import ReportRepository
from .table_repository import TableRepository

__all__ = ["ConfigRepository", "ReportRepository", "TableRepository"]
