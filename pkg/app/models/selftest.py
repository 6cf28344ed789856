"""Outcome of one invariant check."""

from dataclasses import dataclass
from typing import Any, Dict


@dataclass(frozen=True)
class InvariantCheck:
    name: str
    value: float
    threshold: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "passed": self.passed,
            "detail": self.detail,
        }
