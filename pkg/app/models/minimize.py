"""Vortex-position minimization problems and results."""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from app.core.config import settings
from app.core.exceptions import ValidationException
from app.models.grid import BoundarySignal


@dataclass(frozen=True, eq=False)
class MinimizeProblem:
    boundary: BoundarySignal
    charges: Tuple[int, ...]
    margin: float = settings.DEFAULT_MARGIN
    max_evaluations: int = settings.MAX_EVALUATIONS
    restarts: int = settings.RESTARTS
    seed: int = settings.DEFAULT_SEED
    step: float = settings.SIMPLEX_STEP
    tolerance: float = settings.SIMPLEX_TOLERANCE
    formulation: str = "mirror"

    def __post_init__(self):
        if self.boundary.kind != "unit":
            raise ValidationException("minimization needs circle-valued boundary data")
        if not 0.0 <= self.margin < 0.5:
            raise ValidationException(f"interior margin must lie in [0, 0.5), got {self.margin}")
        for charge in self.charges:
            if int(charge) != charge or charge == 0:
                raise ValidationException(f"vortex charge must be a nonzero integer, got {charge!r}")
        if self.max_evaluations < 1 or self.restarts < 1:
            raise ValidationException("evaluation budget and restart count must be positive")
        if self.formulation not in ("mirror", "conjugate"):
            raise ValidationException(f"unknown energy formulation {self.formulation!r}")
        object.__setattr__(self, "charges", tuple(int(d) for d in self.charges))

    @property
    def radius_limit(self) -> float:
        return 1.0 - self.margin


@dataclass(frozen=True)
class TraceEntry:
    evaluation: int
    positions: Tuple[complex, ...]
    energy: float


@dataclass(frozen=True, eq=False)
class MinimizeResult:
    """Best configuration found; `trace` lists accepted best-so-far iterates."""

    positions: Tuple[complex, ...]
    charges: Tuple[int, ...]
    energy: float
    evaluations: int
    trace: Tuple[TraceEntry, ...] = ()
    terminated_by: str = "diameter"
    gradient_norm: float = 0.0
    start_index: int = 0
    starts: List[float] = field(default_factory=list)

    @property
    def budget_exhausted(self) -> bool:
        return self.terminated_by == "budget"

    def rows(self) -> List[Dict[str, float]]:
        rows = []
        for entry in self.trace:
            row: Dict[str, float] = {"evaluation": entry.evaluation, "energy": entry.energy}
            for i, p in enumerate(entry.positions):
                row[f"x{i}"] = p.real
                row[f"y{i}"] = p.imag
            rows.append(row)
        return rows
