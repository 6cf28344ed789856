"""Inequality reports and stability sweeps."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from app.core.config import settings


@dataclass(frozen=True)
class BoundReport:
    """lhs <= rhs checked up to `tolerance`."""

    lhs: float
    rhs: float
    context: str = ""
    tolerance: float = settings.BOUND_TOLERANCE
    secondary: Optional["BoundReport"] = None

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs + self.tolerance

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    def to_dict(self) -> Dict[str, Any]:
        result: Dict[str, Any] = {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "slack": self.slack,
            "context": self.context,
        }
        if self.secondary is not None:
            result["secondary"] = self.secondary.to_dict()
        return result


@dataclass(frozen=True)
class FluxReport:
    level: float
    flux: float
    rhs: float
    contour_count: int

    @property
    def relative_gap(self) -> float:
        return abs(self.flux - self.rhs) / max(1.0, abs(self.rhs))


@dataclass(frozen=True)
class StabilitySweep:
    """Energies along a path of the moving vortex and the boundary-limit energy."""

    positions: Tuple[complex, ...]
    energies: Tuple[float, ...]
    limit_energy: float
    limit_charge: int
    gaps: Tuple[float, ...] = field(default=())

    @property
    def final_gap(self) -> float:
        return self.gaps[-1] if self.gaps else 0.0

    @property
    def converged(self) -> bool:
        return self.final_gap <= settings.STABILITY_GAP

    def rows(self) -> List[Dict[str, float]]:
        return [
            {"step": k + 1, "x": p.real, "y": p.imag, "energy": e, "gap": g}
            for k, (p, e, g) in enumerate(zip(self.positions, self.energies, self.gaps))
        ]
