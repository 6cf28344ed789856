"""Energy breakdowns, sphere-valued lifts and gauge reports."""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from app.models.grid import PolarGrid
from app.models.hodge import HodgeParts
from app.models.vortex import SingularMap


@dataclass(frozen=True, eq=False)
class SphereField:
    """
    Unit vectors u on the grid with closed-form partial derivatives.

    values, dx, dy have shape (Nr, Ntheta, 3).
    """

    grid: PolarGrid
    values: np.ndarray
    dx: np.ndarray
    dy: np.ndarray

    def dirichlet_density(self) -> np.ndarray:
        """|grad u|^2 at every node."""
        return np.sum(self.dx ** 2, axis=-1) + np.sum(self.dy ** 2, axis=-1)

    def area_density(self) -> np.ndarray:
        """u . (u_x x u_y), the pullback of the area form."""
        return np.einsum("...i,...i->...", self.values, np.cross(self.dx, self.dy))

    def unit_defect(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.values, axis=-1) - 1.0)))


@dataclass(frozen=True)
class EnergyBreakdown:
    weighted_term: float
    b_term: float
    h_term: float
    lift_term: float
    total: float

    @property
    def consistency_gap(self) -> float:
        """|lift + b + h - total| relative to max(1, total)."""
        return abs(self.lift_term + self.b_term + self.h_term - self.total) / max(1.0, abs(self.total))

    def to_dict(self) -> Dict[str, float]:
        return {
            "weighted_term": self.weighted_term,
            "b_term": self.b_term,
            "h_term": self.h_term,
            "lift_term": self.lift_term,
            "total": self.total,
            "consistency_gap": self.consistency_gap,
        }


@dataclass(frozen=True)
class DegreeReport:
    raw: float
    rounded: int
    ambiguous: bool


@dataclass(frozen=True, eq=False)
class GaugeReport:
    """Energies before and after g -> g exp(-ib) and the residual of the gauge identity."""

    projected: SingularMap
    energy: float
    projected_energy: float
    correction: float
    residual: float
    projected_parts: Optional[HodgeParts] = None

    def to_dict(self) -> Dict[str, float]:
        return {
            "energy": self.energy,
            "projected_energy": self.projected_energy,
            "correction": self.correction,
            "residual": self.residual,
        }


@dataclass(frozen=True)
class VariationCheck:
    analytic: float
    finite_difference: float
    relative_gap: float
    step: Optional[float] = None
