"""Service for building, sampling and inspecting singular circle-valued maps."""

import logging
from math import comb
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy import ndimage

from app.core.config import settings
from app.core.exceptions import (
    NumericalContractException,
    UnresolvedSamplingException,
    ValidationException,
)
from app.models.grid import BoundarySignal, PolarGrid
from app.models.vortex import PhaseTerm, SingularMap, SmoothPhase, Vortex, VortexConfig

logger = logging.getLogger('vortexlab_map_service')


def _principal_increments(samples: np.ndarray, axis: int = -1) -> np.ndarray:
    """arg(s[k+1] / s[k]) along `axis`, closing the loop."""
    return np.angle(np.roll(samples, -1, axis=axis) / samples)


def _unresolved(increments: np.ndarray) -> np.ndarray:
    return np.abs(increments) >= (1.0 - settings.RESOLVABILITY_MARGIN) * np.pi


def _harmonic_terms(coefficient: complex, power: int) -> List[PhaseTerm]:
    """Monomials of Re(c z^k)."""
    terms = []
    for j in range(power + 1):
        value = (coefficient * (1j ** j)).real * comb(power, j)
        if abs(value) > 0.0:
            terms.append(PhaseTerm(float(value), power - j, j))
    return terms


class MapService:
    """Service for singular maps: construction, evaluation, winding and detection."""

    def __init__(self, grid: PolarGrid):
        self.grid = grid

    @staticmethod
    def make_singular_map(
        vortices: VortexConfig,
        phase: SmoothPhase,
        boundary_count: int = settings.DEFAULT_ANGULAR_NODES
    ) -> SingularMap:
        """
        Build g = prod ((z - p)/|z - p|)^d exp(i psi) and materialize its boundary trace.

        Raises:
            NumericalContractException: if the sampled trace degree differs from the total charge
        """
        if phase.boundary_phase is not None and phase.boundary_phase.count != boundary_count:
            boundary_count = phase.boundary_phase.count
        if boundary_count <= 2 * phase.degree:
            raise ValidationException(
                f"boundary sample count {boundary_count} cannot resolve a phase of degree {phase.degree}"
            )
        singular_map = SingularMap(vortices, phase)
        angles = 2.0 * np.pi * np.arange(boundary_count) / boundary_count
        trace = BoundarySignal(singular_map.boundary_values(angles), kind="unit")
        degree = MapService.winding_number(trace.samples)
        if degree != vortices.total_charge():
            raise NumericalContractException(
                f"boundary trace has degree {degree} but the vortices carry total charge "
                f"{vortices.total_charge()}; increase the angular count"
            )
        logger.debug(f"[MapService] Built map with {len(vortices)} vortices, degree {degree}")
        return SingularMap(vortices, phase, trace)

    @staticmethod
    def evaluate_g(singular_map: SingularMap, z) -> np.ndarray:
        return singular_map.evaluate(z)

    @staticmethod
    def connection(singular_map: SingularMap, z) -> np.ndarray:
        """Closed-form omega = -i g^{-1} grad g as omega_x + i omega_y."""
        return singular_map.connection(z)

    @staticmethod
    def winding_number(loop_samples: Sequence[complex]) -> int:
        """
        Degree of a closed loop of unit samples.

        Raises:
            UnresolvedSamplingException: if a principal increment reaches pi
        """
        samples = np.asarray(loop_samples, dtype=complex)
        if samples.size == 0:
            return 0
        increments = _principal_increments(samples)
        bad = np.nonzero(_unresolved(increments))[0]
        if bad.size:
            raise UnresolvedSamplingException(
                f"phase increment {increments[bad[0]]:.6g} at sample {int(bad[0])} reaches pi; "
                "sample the loop more finely",
                cell=(int(bad[0]),)
            )
        return int(np.rint(np.sum(increments) / (2.0 * np.pi)))

    @staticmethod
    def boundary_lift(trace: BoundarySignal) -> Tuple[BoundarySignal, int]:
        """
        Continuous lift lambda with lambda(0) = 0 and exp(i lambda) g0(1) = g0.

        Returns:
            Tuple of (lift, degree)
        """
        if trace.kind != "unit":
            raise ValidationException("boundary lift needs a circle-valued boundary signal")
        samples = trace.samples
        increments = _principal_increments(samples)
        bad = np.nonzero(_unresolved(increments))[0]
        if bad.size:
            raise UnresolvedSamplingException(
                f"boundary phase increment at sample {int(bad[0])} reaches pi; sample the boundary more finely",
                cell=(int(bad[0]),)
            )
        lift = np.concatenate([[0.0], np.cumsum(increments[:-1])])
        degree = int(np.rint(np.sum(increments) / (2.0 * np.pi)))
        return BoundarySignal(lift), degree

    @staticmethod
    def total_variation(trace: BoundarySignal) -> float:
        """Sum of |increments| of the lift, approximating the L1 norm of d(g0)/dtheta."""
        increments = _principal_increments(trace.samples)
        return float(np.sum(np.abs(increments)))

    @staticmethod
    def lift_derivative(trace: BoundarySignal) -> BoundarySignal:
        """-i g0^{-1} d(g0)/dtheta: spectral derivative of the periodic part of the lift, plus the degree."""
        lift, degree = MapService.boundary_lift(trace)
        periodic = BoundarySignal(lift.samples - degree * trace.angles)
        return BoundarySignal(periodic.derivative().samples + degree)

    def sample_map(self, singular_map: SingularMap) -> np.ndarray:
        """Complex samples of g at every grid node."""
        return singular_map.evaluate(self.grid.points)

    def _cell_of(self, position: complex) -> Tuple[int, int]:
        """(ring, column) of the plaquette containing `position`; ring -1 is the central cell."""
        radius = abs(position)
        ring = int(np.searchsorted(self.grid.radial_nodes, radius, side="right")) - 1
        if ring < 0:
            return -1, 0
        step = 2.0 * np.pi / self.grid.angular_count
        column = int(np.floor(((np.angle(position) - self.grid.angle_offset) % (2.0 * np.pi)) / step))
        return ring, column % self.grid.angular_count

    def check_resolution(self, singular_map: SingularMap) -> None:
        """
        Reject grids on which two interior vortices share a plaquette or sit in neighbouring ones.

        Raises:
            UnresolvedSamplingException: naming the offending cell
        """
        count = self.grid.angular_count
        cells = [(self._cell_of(v.position), v) for v in singular_map.vortices if not v.is_boundary]
        for i, ((ring_a, col_a), first) in enumerate(cells):
            for (ring_b, col_b), second in cells[i + 1:]:
                if ring_a == -1 or ring_b == -1:
                    close = min(ring_a, ring_b) == -1 and max(ring_a, ring_b) <= 0
                else:
                    gap = abs(col_a - col_b) % count
                    close = abs(ring_a - ring_b) <= 1 and min(gap, count - gap) <= 1
                if close:
                    raise UnresolvedSamplingException(
                        f"vortices at ({first.position.real:.4g}, {first.position.imag:.4g}) and "
                        f"({second.position.real:.4g}, {second.position.imag:.4g}) fall in neighbouring "
                        f"plaquettes {(ring_a, col_a)} and {(ring_b, col_b)}; refine the grid",
                        cell=(ring_a, col_a)
                    )

    def _cell_center(self, ring: int, column: int) -> complex:
        if ring < 0:
            return 0j
        nodes = self.grid.radial_nodes
        step = 2.0 * np.pi / self.grid.angular_count
        radius = 0.5 * (nodes[ring] + nodes[ring + 1])
        return radius * np.exp(1j * (self.grid.angle_offset + (column + 0.5) * step))

    def _plaquette_increments(self, samples: np.ndarray) -> np.ndarray:
        """Increments around each plaquette, shape (Nr - 1, Ntheta, 4), counterclockwise."""
        inner = samples[:-1, :]
        outer = samples[1:, :]
        inner_next = np.roll(inner, -1, axis=1)
        outer_next = np.roll(outer, -1, axis=1)
        return np.stack([
            np.angle(outer / inner),
            np.angle(outer_next / outer),
            np.angle(inner_next / outer_next),
            np.angle(inner / inner_next),
        ], axis=-1)

    def _block_loop(self, ring_lo: int, ring_hi: int, col_lo: int, span: int, samples: np.ndarray) -> np.ndarray:
        """Counterclockwise node loop around plaquette rings [ring_lo, ring_hi], columns col_lo .. col_lo+span-1."""
        count = self.grid.angular_count
        columns = [(col_lo + k) % count for k in range(span + 1)]
        loop = [samples[i, columns[0]] for i in range(ring_lo, ring_hi + 2)]
        loop += [samples[ring_hi + 1, c] for c in columns[1:]]
        loop += [samples[i, columns[-1]] for i in range(ring_hi, ring_lo - 1, -1)]
        loop += [samples[ring_lo, c] for c in reversed(columns[1:-1])]
        return np.asarray(loop)

    def _merge_wrapped(self, labels: np.ndarray) -> np.ndarray:
        """Join labels that touch across the theta = 2 pi seam."""
        parent: Dict[int, int] = {}

        def find(x: int) -> int:
            while parent.get(x, x) != x:
                x = parent.get(x, x)
            return x

        rows = labels.shape[0]
        for i in range(rows):
            left = labels[i, -1]
            if not left:
                continue
            for k in (i - 1, i, i + 1):
                if 0 <= k < rows and labels[k, 0]:
                    a, b = find(int(left)), find(int(labels[k, 0]))
                    if a != b:
                        parent[max(a, b)] = min(a, b)
        if not parent:
            return labels
        merged = labels.copy()
        for label in np.unique(labels[labels > 0]):
            merged[labels == label] = find(int(label))
        return merged

    def _clusters(self, mask: np.ndarray) -> List[np.ndarray]:
        labels, count = ndimage.label(mask, structure=np.ones((3, 3), dtype=int))
        labels = self._merge_wrapped(labels)
        return [np.argwhere(labels == label) for label in np.unique(labels[labels > 0])]

    def _resolve_block(self, cells: np.ndarray, samples: np.ndarray) -> Tuple[int, Tuple[int, int, int, int]]:
        """Winding along the smallest resolvable block loop enclosing `cells`."""
        count = self.grid.angular_count
        rows = cells[:, 0]
        columns = cells[:, 1]
        # Columns may straddle the seam; measure them relative to the first cell
        relative = (columns - columns[0] + count // 2) % count - count // 2
        col_lo = int(columns[0] + relative.min())
        span = int(relative.max() - relative.min() + 1)
        for expansion in range(1, settings.MAX_BLOCK_EXPANSION + 1):
            ring_lo = max(0, int(rows.min()) - expansion)
            ring_hi = min(samples.shape[0] - 2, int(rows.max()) + expansion)
            block_span = span + 2 * expansion
            if block_span >= count:
                break
            loop = self._block_loop(ring_lo, ring_hi, col_lo - expansion, block_span, samples)
            increments = _principal_increments(loop)
            if not np.any(_unresolved(increments)):
                charge = int(np.rint(np.sum(increments) / (2.0 * np.pi)))
                return charge, (ring_lo, ring_hi, col_lo - expansion, block_span)
        cell = (int(rows[0]), int(columns[0]) % count)
        raise UnresolvedSamplingException(
            f"plaquette {cell} has a phase increment reaching pi and no resolvable block around it; "
            "refine the grid",
            cell=cell
        )

    def detect_singularities(self, samples: np.ndarray) -> VortexConfig:
        """
        Locate vortices from unit samples on the grid by plaquette winding.

        Four-node plaquettes between consecutive rings carry the charges; the
        innermost ring closes a central cell around the origin. Plaquettes
        whose increments reach pi are grouped and enclosed by block loops.
        """
        samples = np.asarray(samples, dtype=complex)
        if samples.shape != self.grid.shape:
            raise ValidationException(f"samples have shape {samples.shape}, expected {self.grid.shape}")
        count = self.grid.angular_count

        increments = self._plaquette_increments(samples)
        charges = np.rint(np.sum(increments, axis=-1) / (2.0 * np.pi)).astype(int)
        unresolved = np.any(_unresolved(increments), axis=-1)
        charges[unresolved] = 0

        located: List[Vortex] = []
        consumed = np.zeros(charges.shape, dtype=bool)
        for cluster in self._clusters(unresolved):
            charge, (ring_lo, ring_hi, col_lo, span) = self._resolve_block(cluster, samples)
            block_columns = [(col_lo + k) % count for k in range(span)]
            for ring in range(ring_lo, ring_hi + 1):
                consumed[ring, block_columns] = True
            logger.debug(f"[MapService] Block loop around plaquette {tuple(cluster[0])} carries charge {charge}")
            if charge:
                centers = np.array([self._cell_center(int(i), int(j)) for i, j in cluster])
                located.append(Vortex(complex(np.mean(centers)), charge))

        remaining = np.where(consumed, 0, charges)
        for cluster in self._clusters(remaining != 0):
            charge = int(sum(remaining[i, j] for i, j in cluster))
            if charge:
                centers = np.array([self._cell_center(int(i), int(j)) for i, j in cluster if remaining[i, j]])
                located.append(Vortex(complex(np.mean(centers)), charge))

        central = self.winding_number(samples[0, :])
        if central:
            located.append(Vortex(0j, central))

        located.sort(key=lambda v: (v.position.real, v.position.imag))
        logger.info(f"[MapService] Detected {len(located)} vortices, total charge {sum(v.charge for v in located)}")
        return VortexConfig(tuple(located))

    @staticmethod
    def seeded_family(
        seed: int,
        count: int,
        max_vortices: int = 4,
        max_charge: int = 3,
        min_separation: float = 0.2,
        max_radius: float = 0.8,
        boundary_count: int = settings.DEFAULT_ANGULAR_NODES
    ) -> List[SingularMap]:
        """
        Reproducible random maps: up to `max_vortices` interior vortices with
        |d| <= max_charge and cubic phases, every other one harmonic.
        """
        rng = np.random.default_rng(seed)
        family = []
        for index in range(count):
            vortex_count = int(rng.integers(0, max_vortices + 1))
            positions: List[complex] = []
            while len(positions) < vortex_count:
                radius = max_radius * np.sqrt(rng.uniform())
                candidate = complex(radius * np.exp(2j * np.pi * rng.uniform()))
                if all(abs(candidate - p) >= min_separation for p in positions):
                    positions.append(candidate)
            charges = [int(rng.integers(1, max_charge + 1)) * int(rng.choice([-1, 1])) for _ in positions]
            vortices = VortexConfig(tuple(Vortex(p, d) for p, d in zip(positions, charges)))

            terms: List[PhaseTerm] = []
            for power in range(1, 4):
                coefficient = complex(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))
                terms.extend(_harmonic_terms(coefficient, power))
            if index % 2 == 1:
                bump = float(rng.uniform(0.2, 0.6)) * float(rng.choice([-1.0, 1.0]))
                terms.extend([PhaseTerm(bump, 2, 0), PhaseTerm(bump, 0, 2)])
                terms.append(PhaseTerm(float(rng.uniform(-0.3, 0.3)), 2, 1))
            family.append(MapService.make_singular_map(vortices, SmoothPhase(tuple(terms)), boundary_count))
        return family
