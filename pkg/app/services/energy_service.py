"""
Service for the renormalized Dirichlet energy, the sphere-valued lift and
the first-variation machinery.
"""

import logging
from typing import List, Optional, Sequence, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import NumericalContractException, ValidationException
from app.models.energy import (
    DegreeReport,
    EnergyBreakdown,
    GaugeReport,
    SphereField,
    VariationCheck,
)
from app.models.grid import BoundarySignal, PolarGrid
from app.models.hodge import HodgeParts
from app.models.vortex import PhaseTerm, SingularMap, SmoothPhase
from app.services.grid_service import GridService
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from app.utils import potentials
from app.utils.spectral import sech, weight_f

logger = logging.getLogger('vortexlab_energy_service')


def _sphere(grid: PolarGrid, a: np.ndarray, grad_a: np.ndarray, g: np.ndarray, omega: np.ndarray) -> SphereField:
    """
    u = (g sech a, -tanh a) with
    d_j u = (g sech a (i omega_j - tanh a a_j), -sech^2 a a_j).
    """
    s = sech(a)
    t = np.tanh(a)
    horizontal = g * s
    values = np.stack([horizontal.real, horizontal.imag, -t], axis=-1)

    def partial(a_j, omega_j):
        moving = horizontal * (1j * omega_j - t * a_j)
        return np.stack([moving.real, moving.imag, -s * s * a_j], axis=-1)

    return SphereField(
        grid=grid,
        values=values,
        dx=partial(grad_a.real, omega.real),
        dy=partial(grad_a.imag, omega.imag),
    )


def _blaschke_parts(p: Sequence[complex], q: Sequence[complex], z: np.ndarray):
    """log|w|, its gradient and w/|w| for w = prod (z - p_j) / (z - q_j)."""
    positions = np.array(list(p) + list(q), dtype=complex)
    charges = np.array([1] * len(p) + [-1] * len(q))
    a, grad_a = potentials.log_potential(positions, charges, z)
    offsets = z[..., None] - positions
    units = offsets / np.abs(offsets)
    g = np.prod(units ** charges, axis=-1)
    return a, grad_a, g / np.abs(g)


class EnergyService:
    """Service evaluating E(g) = int f(a)(|grad g|^2 + |grad a|^2) + 1/4 int |grad b|^2 on a grid."""

    def __init__(self, grid: PolarGrid, hodge: Optional[HodgeService] = None):
        self.grid = grid
        self.hodge = hodge or HodgeService(grid)

    def renormalized_energy(self, singular_map: SingularMap, parts: HodgeParts) -> EnergyBreakdown:
        """
        Quadrature of the weighted term, the b term and, independently, a quarter
        of the Dirichlet energy of the lift u.
        """
        try:
            grid = self.grid
            points = grid.points
            omega = singular_map.connection(points)
            a, grad_a = parts.a.evaluate(points)
            grad_b = parts.b.gradient(points)

            weighted = grid.integrate(weight_f(a) * (np.abs(omega) ** 2 + np.abs(grad_a) ** 2))
            b_term = 0.25 * grid.integrate(np.abs(grad_b) ** 2)
            lift = _sphere(grid, a, grad_a, singular_map.evaluate(points), omega)
            lift_term = 0.25 * grid.integrate(lift.dirichlet_density())

            breakdown = EnergyBreakdown(
                weighted_term=weighted,
                b_term=b_term,
                h_term=0.0,
                lift_term=lift_term,
                total=weighted + b_term,
            )
            if breakdown.consistency_gap > settings.CONSISTENCY_TOLERANCE:
                logger.warning(
                    f"[EnergyService] Lift and weighted terms disagree: gap {breakdown.consistency_gap:.3e}"
                )
            logger.debug(f"[EnergyService] Energy {breakdown.total:.12g} (b term {b_term:.3e})")
            return breakdown
        except ValidationException:
            raise
        except Exception as e:
            logger.error(f"[EnergyService] Energy evaluation failed: {str(e)}")
            raise NumericalContractException(f"Failed to evaluate energy: {str(e)}")

    def energy_of(self, singular_map: SingularMap) -> EnergyBreakdown:
        """Decompose and evaluate in one step."""
        return self.renormalized_energy(singular_map, self.hodge.decompose(singular_map))

    def sphere_field(self, singular_map: SingularMap, parts: HodgeParts) -> SphereField:
        """Closed-form lift u = inverse stereographic projection of e^a g, north pole at 0."""
        points = self.grid.points
        a, grad_a = parts.a.evaluate(points)
        return _sphere(self.grid, a, grad_a, singular_map.evaluate(points), singular_map.connection(points))

    def b_energy(self, parts: HodgeParts) -> float:
        """int |grad b|^2"""
        return self.grid.integrate(np.abs(parts.b.gradient(self.grid.points)) ** 2)

    @staticmethod
    def lift_degree(field: SphereField) -> DegreeReport:
        """(1/4 pi) int u . (u_x x u_y), rounded; ambiguous when off an integer by more than 0.1."""
        raw = field.grid.integrate(field.area_density()) / (4.0 * np.pi)
        rounded = int(np.rint(raw))
        ambiguous = abs(raw - rounded) > settings.DEGREE_FLAG_THRESHOLD
        if ambiguous:
            logger.warning(f"[EnergyService] Lift degree {raw:.6f} is not close to an integer")
        return DegreeReport(raw=float(raw), rounded=rounded, ambiguous=ambiguous)

    @staticmethod
    def _plane_grid(p, q, truncation_radius, radial_count, angular_count) -> PolarGrid:
        if len(p) != len(q) or not p:
            raise ValidationException(
                f"plane maps need equally many +1 and -1 charges, got {len(p)} and {len(q)}"
            )
        return GridService.build_plane_grid(truncation_radius, tuple(p) + tuple(q), radial_count, angular_count)

    @staticmethod
    def plane_energy(
        p: Sequence[complex],
        q: Sequence[complex],
        truncation_radius: float = settings.PLANE_TRUNCATION_RADIUS,
        radial_count: int = settings.DEFAULT_RADIAL_NODES,
        angular_count: int = settings.DEFAULT_ANGULAR_NODES
    ) -> float:
        """
        1/4 int over |z| < R of |grad u|^2 for w = prod (z - p_j)/(z - q_j), evaluated
        as int 2 |w'/w|^2 f(log|w|).

        Raises:
            ValidationException: if the counts differ or R < 4 max(|p|, |q|)
        """
        grid = EnergyService._plane_grid(p, q, truncation_radius, radial_count, angular_count)
        a, grad_a, _ = _blaschke_parts(p, q, grid.points)
        energy = grid.integrate(2.0 * weight_f(a) * np.abs(grad_a) ** 2)
        logger.debug(f"[EnergyService] Plane energy {energy:.12g} at R = {truncation_radius}")
        return energy

    @staticmethod
    def plane_tail(p: Sequence[complex], q: Sequence[complex], truncation_radius: float) -> float:
        """
        Leading energy outside |z| < R: w ~ 1 + D/z with D = sum p - sum q, so
        the density 2 f(0)|D|^2 / |z|^4 integrates to pi |D|^2 / (2 R^2).
        """
        dipole = abs(sum(complex(x) for x in p) - sum(complex(x) for x in q))
        return float(np.pi * dipole ** 2 / (2.0 * truncation_radius ** 2))

    @staticmethod
    def plane_lift(
        p: Sequence[complex],
        q: Sequence[complex],
        truncation_radius: float = settings.PLANE_TRUNCATION_RADIUS,
        radial_count: int = settings.DEFAULT_RADIAL_NODES,
        angular_count: int = settings.DEFAULT_ANGULAR_NODES
    ) -> SphereField:
        grid = EnergyService._plane_grid(p, q, truncation_radius, radial_count, angular_count)
        a, grad_a, g = _blaschke_parts(p, q, grid.points)
        return _sphere(grid, a, grad_a, g, potentials.perpendicular(grad_a))

    def gauge_project(self, singular_map: SingularMap, parts: HodgeParts) -> GaugeReport:
        """
        g -> g e^{-ib}: the phase is replaced by the harmonic extension of its trace.
        Checks E(g) = E(g~) + int (f(a) + 1/4) |grad b|^2.
        """
        count = self.hodge.trace_count(singular_map.phase)
        angles = 2.0 * np.pi * np.arange(count) / count
        harmonic_phase = SmoothPhase(
            boundary_phase=BoundarySignal(singular_map.phase.trace(angles)),
            degree_cap=singular_map.phase.degree_cap,
        )
        projected = MapService.make_singular_map(singular_map.vortices, harmonic_phase, count)
        projected_parts = self.hodge.decompose(projected)

        energy = self.renormalized_energy(singular_map, parts).total
        projected_energy = self.renormalized_energy(projected, projected_parts).total
        points = self.grid.points
        a = parts.a.value(points)
        correction = self.grid.integrate((weight_f(a) + 0.25) * np.abs(parts.b.gradient(points)) ** 2)
        residual = abs(energy - projected_energy - correction) / max(1.0, abs(energy))
        if projected_energy > energy + settings.BOUND_TOLERANCE:
            logger.warning(
                f"[EnergyService] Gauge projection raised the energy from {energy:.12g} to {projected_energy:.12g}"
            )
        logger.info(f"[EnergyService] Gauge projection: {energy:.8g} -> {projected_energy:.8g}")
        return GaugeReport(projected, energy, projected_energy, correction, residual, projected_parts)

    def first_variation(self, singular_map: SingularMap, parts: HodgeParts, test: SmoothPhase) -> float:
        """
        d/dt E(g e^{it psi}) at t = 0:
        int 2 f(a) <omega, grad psi> + 1/2 <grad b, grad psi>.

        Raises:
            ValidationException: if psi does not vanish on the circle
        """
        if test.boundary_phase is not None:
            raise ValidationException("test phases must be polynomials")
        if test.is_zero:
            return 0.0
        self._check_zero_trace(test)
        points = self.grid.points
        grad_test = test.gradient(points)
        omega = singular_map.connection(points)
        a = parts.a.value(points)
        grad_b = parts.b.gradient(points)
        density = 2.0 * weight_f(a) * np.real(np.conj(omega) * grad_test) \
            + 0.5 * np.real(np.conj(grad_b) * grad_test)
        return self.grid.integrate(density)

    def _check_zero_trace(self, test: SmoothPhase) -> None:
        angles = 2.0 * np.pi * np.arange(self.grid.angular_count) / self.grid.angular_count
        trace = float(np.max(np.abs(test.trace(angles))))
        if trace > settings.TRACE_TOLERANCE:
            raise ValidationException(f"test phase has boundary trace {trace:.3e}; it must vanish on the circle")

    def first_variation_check(
        self,
        singular_map: SingularMap,
        test: SmoothPhase,
        step: float = settings.FINITE_DIFFERENCE_STEP
    ) -> VariationCheck:
        """
        Compare first_variation with a centred difference of the energy at t = +-step.

        The gap is |analytic - fd| / max(|analytic|, |fd|); it is 0 when both
        values are below the negligible-variation floor.
        """
        parts = self.hodge.decompose(singular_map)
        analytic = self.first_variation(singular_map, parts, test)
        count = self.hodge.trace_count(singular_map.phase)

        def energy_at(t: float) -> float:
            moved = MapService.make_singular_map(singular_map.vortices, singular_map.phase.plus(test, t), count)
            return self.energy_of(moved).total

        finite_difference = (energy_at(step) - energy_at(-step)) / (2.0 * step)
        scale = max(abs(analytic), abs(finite_difference))
        if scale < settings.NEGLIGIBLE_VARIATION:
            logger.debug(f"[EnergyService] Variation {analytic:.3e} is negligible; gap not measured")
            gap = 0.0
        else:
            gap = abs(analytic - finite_difference) / scale
        return VariationCheck(analytic, finite_difference, gap, step)

    @staticmethod
    def variation_basis(size: int = settings.EL_BASIS_SIZE) -> List[SmoothPhase]:
        """(1 - x^2 - y^2) x^m y^n in graded order 1, x, y, x^2, xy, y^2, ..."""
        basis: List[SmoothPhase] = []
        degree = 0
        while len(basis) < size:
            for n in range(degree + 1):
                if len(basis) == size:
                    break
                m = degree - n
                basis.append(SmoothPhase((
                    PhaseTerm(1.0, m, n),
                    PhaseTerm(-1.0, m + 2, n),
                    PhaseTerm(-1.0, m, n + 2),
                )))
            degree += 1
        return basis

    def el_residual(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        size: int = settings.EL_BASIS_SIZE
    ) -> float:
        """
        max_j |int (2 f(a) + 1/2) <grad b, grad phi_j>| over the zero-trace basis.

        The a-part of the first variation drops out: f(a) grad-perp a = grad-perp F(a)
        is divergence free and phi_j vanishes on the circle.
        """
        points = self.grid.points
        a = parts.a.value(points)
        grad_b = parts.b.gradient(points)
        factor = 2.0 * weight_f(a) + 0.5
        residual = 0.0
        for phi in self.variation_basis(size):
            value = self.grid.integrate(factor * np.real(np.conj(grad_b) * phi.gradient(points)))
            residual = max(residual, abs(value))
        return residual

    @staticmethod
    def conformality_defect(
        field: SphereField,
        centers: Sequence[complex] = (),
        exclusion: float = settings.EXCLUSION_RADIUS
    ) -> float:
        """max of ||u_x| - |u_y|| and |<u_x, u_y>| over nodes away from `centers`."""
        mask = field.grid.distance_to(list(centers)) >= exclusion
        if not np.any(mask):
            return 0.0
        dx, dy = field.dx[mask], field.dy[mask]
        length_gap = np.abs(np.linalg.norm(dx, axis=-1) - np.linalg.norm(dy, axis=-1))
        angle_gap = np.abs(np.sum(dx * dy, axis=-1))
        return float(max(np.max(length_gap), np.max(angle_gap)))

    def arctan_identity(self, singular_map: SingularMap, parts: HodgeParts) -> Tuple[float, float]:
        """(int f(a) |grad a|^2, int |grad arctan e^a|^2) with d/da arctan e^a = sech(a) / 2."""
        a, grad_a = parts.a.evaluate(self.grid.points)
        squared = np.abs(grad_a) ** 2
        left = self.grid.integrate(weight_f(a) * squared)
        right = self.grid.integrate((0.5 * sech(a)) ** 2 * squared)
        return left, right
