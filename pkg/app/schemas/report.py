"""Report schemas and serialization for VortexLab."""

import hashlib
import json
import math
from datetime import datetime, timezone
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, Field

from app.core.config import settings


class ReportEnvelope(BaseModel):
    """Top-level report written by every command."""
    tool: str = settings.TOOL_NAME
    version: str = settings.VERSION
    command: str
    config_hash: str = Field(description="SHA-256 of the canonical config JSON")
    timestamp: str = Field(description="UTC time of the run; not part of the hash")
    results: Dict[str, Any]


class CommandResult(BaseModel):
    """What a command handler hands back: report fields, row tables and contract violations."""
    results: Dict[str, Any] = {}
    tables: Dict[str, List[Dict[str, Any]]] = {}
    violations: List[str] = []


def significant(value: Any, digits: int = settings.REPORT_SIGNIFICANT_DIGITS) -> Any:
    """
    Recursively convert numpy values to plain Python and round floats to
    `digits` significant digits; complex numbers become [re, im], non-finite
    floats become strings.
    """
    if isinstance(value, dict):
        return {str(k): significant(v, digits) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [significant(v, digits) for v in value]
    if isinstance(value, np.ndarray):
        return significant(value.tolist(), digits)
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [significant(float(value.real), digits), significant(float(value.imag), digits)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(f"{value:.{digits}g}")
    return value


def config_hash(canonical_json: str) -> str:
    return hashlib.sha256(canonical_json.encode("utf-8")).hexdigest()


def build_envelope(command: str, canonical_json: str, results: Dict[str, Any]) -> ReportEnvelope:
    return ReportEnvelope(
        command=command,
        config_hash=config_hash(canonical_json),
        timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
        results=significant(results),
    )


def emit_report(envelope: ReportEnvelope) -> str:
    """Stable JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(envelope.model_dump(), sort_keys=True, indent=2) + "\n"
