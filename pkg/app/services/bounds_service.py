"""Service checking the quantitative estimates: singularity counts, level-set flux, extensions and stability."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logit

from app.core.config import settings
from app.core.exceptions import (
    DegreeMismatchException,
    NonRegularLevelException,
    NumericalContractException,
    ValidationException,
)
from app.models.bounds import BoundReport, FluxReport, StabilitySweep
from app.models.grid import BoundarySignal, PolarGrid
from app.models.hodge import HodgeParts
from app.models.vortex import SingularMap, SmoothPhase, Vortex, VortexConfig
from app.services.energy_service import EnergyService
from app.services.grid_service import GridService
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from app.utils.contours import polar_level_contours, segment_midpoints
from app.utils.spectral import weight_f

logger = logging.getLogger('vortexlab_bounds_service')

# Boundary samples are pulled this far inside so boundary vortices stay off them.
_BOUNDARY_INSET = 1e-9


def weak_l2_quasinorm(values: np.ndarray, weights: np.ndarray) -> float:
    """
    Discrete sup of gamma * |{field > gamma}|^(1/2).

    Samples are sorted in decreasing order and equal values grouped; each group
    is placed at the midpoint of its measure interval, and the last group also
    at the full measure. Measures below 1e-3 of the total are ignored.

    Args:
        values: Nonnegative samples
        weights: Quadrature weights of the samples

    Returns:
        The quasinorm estimate
    """
    values = np.abs(np.asarray(values, dtype=float).ravel())
    weights = np.asarray(weights, dtype=float).ravel()
    if values.shape != weights.shape:
        raise ValidationException("quasinorm needs one weight per sample")
    if values.size == 0 or np.max(values) == 0.0:
        return 0.0

    order = np.argsort(-values, kind="stable")
    values, weights = values[order], weights[order]
    measure = np.cumsum(weights)
    total = float(measure[-1])

    # Group ends: last index of every run of (relatively) equal values
    breaks = np.abs(np.diff(values)) > 1e-9 * np.maximum(np.abs(values[:-1]), 1e-300)
    ends = np.append(np.nonzero(breaks)[0], values.size - 1)
    starts = np.concatenate([[0.0], measure[ends[:-1]]])
    midpoints = 0.5 * (starts + measure[ends])

    levels = np.append(values[ends], values[ends[-1]])
    measures = np.append(midpoints, total)
    admissible = measures >= settings.QUASINORM_MIN_MEASURE * total
    return float(np.max(levels[admissible] * np.sqrt(measures[admissible])))


def quasinorm_constant(rows: Iterable[Tuple[float, float, float]]) -> float:
    """Smallest C with quasinorm <= C (energy + boundary variation) over (quasinorm, energy, variation) rows."""
    ratios = [q / (e + tv) for q, e, tv in rows if e + tv > 0.0]
    return float(max(ratios)) if ratios else 0.0


def f_distributed_levels(seed: int, count: int) -> np.ndarray:
    """Levels drawn from the density 2 f(t): logistic with scale 1/2."""
    rng = np.random.default_rng(seed)
    return 0.5 * logit(rng.uniform(size=count))


def f_distributed_levels_below(seed: int, count: int, ceiling: float) -> np.ndarray:
    """The first `count` f-distributed levels of the seeded stream that lie below `ceiling`."""
    rng = np.random.default_rng(seed)
    kept: List[float] = []
    while len(kept) < count:
        draws = 0.5 * logit(rng.uniform(size=4 * count))
        kept.extend(draws[draws < ceiling].tolist())
    return np.array(kept[:count])


class BoundsService:
    """Service evaluating the a-priori inequalities on a fixed grid."""

    def __init__(self, grid: PolarGrid, energy: Optional[EnergyService] = None):
        self.grid = grid
        self.energy = energy or EnergyService(grid)
        self.hodge = self.energy.hodge

    def weighted_a_energy(self, parts: HodgeParts) -> float:
        """int f(a) |grad a|^2"""
        a, grad_a = parts.a.evaluate(self.grid.points)
        return self.grid.integrate(weight_f(a) * np.abs(grad_a) ** 2)

    def vortex_count_bound(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        trace: Optional[BoundarySignal] = None
    ) -> BoundReport:
        """
        pi sum_{d>0} d (boundary charges halved) <= TV(g0)/2 + int f(a)|grad a|^2,
        with sum |d| <= 3/(2 pi) TV + (2/pi) int f(a)|grad a|^2 as the secondary report.

        a does not change under the gauge projection g -> g e^{-ib}, so the
        bound is evaluated on the given decomposition.
        """
        trace = trace if trace is not None else singular_map.trace
        if trace is None:
            raise ValidationException("count bound needs the boundary trace of the map")
        vortices = singular_map.vortices
        variation = MapService.total_variation(trace)
        weighted = self.weighted_a_energy(parts)

        positive = vortices.charge_sum(False, positive_only=True) + 0.5 * vortices.charge_sum(True, positive_only=True)
        absolute = vortices.charge_sum(False, absolute=True) + 0.5 * vortices.charge_sum(True, absolute=True)
        context = f"{len(vortices)} vortices, boundary variation {variation:.6g}"
        secondary = BoundReport(
            lhs=float(absolute),
            rhs=1.5 / np.pi * variation + 2.0 / np.pi * weighted,
            context="sum |d| form",
        )
        report = BoundReport(
            lhs=float(np.pi * positive),
            rhs=0.5 * variation + weighted,
            context=context,
            secondary=secondary,
        )
        if not (report.holds and secondary.holds):
            logger.warning(f"[BoundsService] Count bound violated: {report.to_dict()}")
        return report

    def level_set_flux(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        level: float,
        trace: Optional[BoundarySignal] = None
    ) -> FluxReport:
        """
        int over {a = t} of |grad a| against
        2 pi sum_{d>0} d (pi for boundary charges) - int over {a < t} of lambda' on the circle.

        Raises:
            NonRegularLevelException: if the level set meets a critical point of a
        """
        trace = trace if trace is not None else singular_map.trace
        if trace is None:
            raise ValidationException("level-set flux needs the boundary trace of the map")
        grid = self.grid
        values = parts.a.value(grid.points)
        curves = polar_level_contours(values, grid.radial_nodes, grid.angles, level)

        flux = 0.0
        for curve in curves:
            midpoints, lengths = segment_midpoints(curve)
            if midpoints.size == 0:
                continue
            speeds = np.abs(parts.a.gradient(midpoints))
            if np.min(speeds) < settings.REGULAR_GRADIENT_FLOOR:
                raise NonRegularLevelException(
                    f"level {level:.6g} passes through a critical point of a",
                    retry_level=level + settings.LEVEL_RETRY_SHIFT,
                )
            flux += float(np.sum(lengths * speeds))

        derivative = MapService.lift_derivative(trace)
        boundary_a = parts.a.value((1.0 - _BOUNDARY_INSET) * np.exp(1j * derivative.angles))
        below = boundary_a < level
        boundary_part = float(np.sum(derivative.samples[below])) * 2.0 * np.pi / derivative.count
        vortices = singular_map.vortices
        rhs = 2.0 * np.pi * vortices.charge_sum(False, positive_only=True) \
            + np.pi * vortices.charge_sum(True, positive_only=True) - boundary_part
        return FluxReport(level=float(level), flux=flux, rhs=float(rhs), contour_count=len(curves))

    def flux_sweep(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        levels: Sequence[float]
    ) -> List[FluxReport]:
        """level_set_flux at every level, retrying once at the shifted level when a level is not regular."""
        reports = []
        for level in levels:
            try:
                reports.append(self.level_set_flux(singular_map, parts, level))
            except NonRegularLevelException as e:
                logger.info(f"[BoundsService] Retrying non-regular level {level:.6g} at {e.retry_level:.6g}")
                reports.append(self.level_set_flux(singular_map, parts, e.retry_level))
        return reports

    def gradient_quasinorm(self, parts: HodgeParts) -> float:
        """Weak-L2 quasinorm of |grad a| on the grid."""
        magnitudes = np.abs(parts.a.gradient(self.grid.points))
        return weak_l2_quasinorm(magnitudes, self.grid.quadrature_weights)

    @staticmethod
    def extend_boundary(trace: BoundarySignal, degree: int) -> SingularMap:
        """
        Map with one charge-d vortex at 0 and harmonic phase: g = (z/|z|)^d e^{i phi},
        phi the harmonic extension of the lift of (z/|z|)^{-d} g0.

        Raises:
            DegreeMismatchException: if g0 does not have degree d
        """
        lift, winding = MapService.boundary_lift(trace)
        if winding != degree:
            raise DegreeMismatchException(f"boundary data has degree {winding}, requested charge {degree}")
        offset = float(np.angle(trace.samples[0]))
        periodic = BoundarySignal(lift.samples - degree * trace.angles + offset)
        vortices = VortexConfig((Vortex(0j, degree),)) if degree else VortexConfig()
        extension = MapService.make_singular_map(vortices, SmoothPhase(boundary_phase=periodic), trace.count)

        mismatch = float(np.max(np.abs(extension.trace.samples - trace.samples)))
        if mismatch > settings.TRACE_TOLERANCE:
            raise NumericalContractException(f"extension misses the boundary data by {mismatch:.3e}")
        return extension

    def extension_energy_bound(self, trace: BoundarySignal, degree: int) -> BoundReport:
        """1/2 int |grad u|^2 of the extension <= pi^2/2 TV(g0) + 4 pi |d|."""
        extension = self.extend_boundary(trace, degree)
        breakdown = self.energy.energy_of(extension)
        variation = MapService.total_variation(trace)
        report = BoundReport(
            lhs=2.0 * breakdown.lift_term,
            rhs=0.5 * np.pi ** 2 * variation + 4.0 * np.pi * abs(degree),
            context=f"degree {degree}, boundary variation {variation:.6g}",
        )
        logger.info(f"[BoundsService] Extension bound slack {report.slack:.6g}")
        return report

    def stability_sweep(
        self,
        trace: BoundarySignal,
        vortices: VortexConfig,
        index: int,
        path: Sequence[complex],
        limit: Optional[complex] = None,
        threads: int = 1
    ) -> StabilitySweep:
        """
        int f(a_k)|grad a_k|^2 with vortex `index` moved along `path`, the Neumann
        data fixed by g0, against the configuration at `limit`.

        A limit point on the circle carries twice the moving charge.
        """
        if not 0 <= index < len(vortices):
            raise ValidationException(f"moving vortex index {index} out of range")
        path = [complex(p) for p in path]
        if not path:
            raise ValidationException("stability path is empty")
        for p in path:
            if abs(p) > 1.0 + settings.BOUNDARY_TOLERANCE:
                raise ValidationException(f"stability path leaves the closed disk at ({p.real:.6g}, {p.imag:.6g})")
        limit = path[-1] if limit is None else complex(limit)
        if abs(limit) > 1.0 + settings.BOUNDARY_TOLERANCE:
            raise ValidationException(f"limit point ({limit.real:.6g}, {limit.imag:.6g}) lies outside the disk")

        moving = vortices.entries[index]
        limit_charge = moving.charge
        if abs(abs(limit) - 1.0) <= settings.BOUNDARY_TOLERANCE:
            limit_charge = 2 * moving.charge
        entries = list(vortices.entries)
        entries[index] = Vortex(limit, limit_charge)
        limit_config = VortexConfig(tuple(entries))

        configs = [vortices.moved(index, p) for p in path]
        with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
            energies = list(executor.map(lambda c: self._mirror_energy(trace, c), configs))
        limit_energy = self._mirror_energy(trace, limit_config)
        gaps = tuple(abs(e - limit_energy) / max(1.0, abs(limit_energy)) for e in energies)

        sweep = StabilitySweep(tuple(path), tuple(energies), limit_energy, limit_charge, gaps)
        if not sweep.converged:
            logger.warning(f"[BoundsService] Sweep ends {sweep.final_gap:.3e} away from the limit energy")
        return sweep

    def _mirror_energy(self, trace: BoundarySignal, vortices: VortexConfig) -> float:
        grid = GridService.build_polar_grid(
            self.grid.radial_count,
            self.grid.angular_count,
            centers=tuple(vortices.positions),
            angle_offset=np.pi / self.grid.angular_count,
        )
        a = HodgeService(grid).mirror_assembly(vortices, trace)
        values, gradients = a.evaluate(grid.points)
        return grid.integrate(weight_f(values) * np.abs(gradients) ** 2)
