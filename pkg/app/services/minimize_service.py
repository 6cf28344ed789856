"""Service minimizing the renormalized energy over vortex positions for fixed boundary data."""

import logging
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from app.core.config import settings
from app.core.exceptions import DegreeMismatchException, DomainException, ValidationException
from app.models.grid import BoundarySignal, PolarGrid
from app.models.minimize import MinimizeProblem, MinimizeResult, TraceEntry
from app.models.vortex import SingularMap, SmoothPhase, Vortex, VortexConfig
from app.services.grid_service import GridService
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from app.utils.nelder_mead import SimplexResult, nelder_mead
from app.utils.spectral import weight_f

logger = logging.getLogger('vortexlab_minimize_service')


def _positions(x: np.ndarray) -> Tuple[complex, ...]:
    return tuple(complex(x[2 * i], x[2 * i + 1]) for i in range(len(x) // 2))


def _flatten(positions: Sequence[complex]) -> np.ndarray:
    return np.array([c for p in positions for c in (p.real, p.imag)], dtype=float)


def _position_key(positions: Sequence[complex]) -> Tuple[float, ...]:
    return tuple(c for p in positions for c in (p.real, p.imag))


def enumerate_partitions(degree: int, max_vortices: int, max_charge: Optional[int] = None) -> List[Tuple[int, ...]]:
    """
    Charge lists with nonzero entries in [-max_charge, max_charge], at most
    `max_vortices` of them, summing to `degree`; each list in decreasing order.

    `max_charge` defaults to max(2, |degree|), so degree 0 data still offers
    the double dipole (2, -2) next to (1, -1).
    """
    if max_vortices < 0:
        raise ValidationException("max_vortices must be nonnegative")
    max_charge = max_charge if max_charge is not None else max(2, abs(degree))
    values = [d for d in range(max_charge, -max_charge - 1, -1) if d != 0]
    partitions: List[Tuple[int, ...]] = [()] if degree == 0 else []
    for length in range(1, max_vortices + 1):
        for combination in combinations_with_replacement(values, length):
            if sum(combination) == degree:
                partitions.append(tuple(combination))
    return partitions


class MinimizeService:
    """Service searching vortex positions with the b = 0 reduction as the inner solve."""

    def __init__(self, resolution: Tuple[int, int] = settings.MINIMIZE_RESOLUTION):
        self.radial_count, self.angular_count = resolution

    def _grid(self, positions: Sequence[complex]) -> PolarGrid:
        return GridService.build_polar_grid(self.radial_count, self.angular_count, centers=tuple(positions))

    @staticmethod
    def _check_degree(trace: BoundarySignal, charges: Sequence[int]) -> None:
        _, degree = MapService.boundary_lift(trace)
        if degree != sum(charges):
            raise DegreeMismatchException(
                f"charges {list(charges)} sum to {sum(charges)} but the boundary data has degree {degree}"
            )

    def configuration_energy(
        self,
        trace: BoundarySignal,
        positions: Sequence[complex],
        charges: Sequence[int],
        formulation: str = "mirror"
    ) -> float:
        """
        2 int f(a)|grad a|^2 for the b = 0 map with these vortices and trace g0.

        `mirror` assembles a from mirror pairs and the Neumann extension of
        lambda' - Q; `conjugate` lifts g0 prod((x - p)/|x - p|)^{-d} and uses
        a = Phi - H(h0) + c. Coincident or out-of-disk positions give inf.
        """
        positions = [complex(p) for p in positions]
        if len(positions) != len(charges):
            raise ValidationException("configuration needs one position per charge")
        for i, p in enumerate(positions):
            if abs(p) >= 1.0 or any(abs(p - other) <= settings.VORTEX_TOLERANCE for other in positions[i + 1:]):
                return np.inf
        vortices = VortexConfig(tuple(Vortex(p, d) for p, d in zip(positions, charges)))
        grid = self._grid(positions)
        hodge = HodgeService(grid)
        try:
            if formulation == "mirror":
                a = hodge.mirror_assembly(vortices, trace)
            elif formulation == "conjugate":
                a = hodge.decompose(self._conjugate_map(trace, vortices)).a
            else:
                raise ValidationException(f"unknown energy formulation {formulation!r}")
            values, gradients = a.evaluate(grid.points)
        except DomainException:
            return np.inf
        return 2.0 * grid.integrate(weight_f(values) * np.abs(gradients) ** 2)

    @staticmethod
    def _conjugate_map(trace: BoundarySignal, vortices: VortexConfig) -> SingularMap:
        """g with the given vortices whose harmonic phase reproduces g0 on the circle."""
        free = SingularMap(vortices, SmoothPhase()).boundary_values(trace.angles)
        residual = BoundarySignal(trace.samples / free, kind="unit")
        lift, degree = MapService.boundary_lift(residual)
        if degree != 0:
            raise DegreeMismatchException(f"vortex charges leave boundary degree {degree}")
        phase = BoundarySignal(lift.samples + float(np.angle(residual.samples[0])))
        return SingularMap(vortices, SmoothPhase(boundary_phase=phase))

    def _project(self, limit: float):
        def project(x: np.ndarray) -> np.ndarray:
            points = x.reshape(-1, 2).copy()
            radii = np.hypot(points[:, 0], points[:, 1])
            outside = radii > limit
            points[outside] *= (limit / radii[outside])[:, None]
            return points.ravel()
        return project

    def _start(self, problem: MinimizeProblem, index: int) -> np.ndarray:
        rng = np.random.default_rng([problem.seed, index])
        count = len(problem.charges)
        radii = 0.5 * problem.radius_limit * np.sqrt(rng.uniform(size=count))
        angles = 2.0 * np.pi * rng.uniform(size=count)
        return _flatten(radii * np.exp(1j * angles))

    def _run(self, problem: MinimizeProblem, index: int) -> SimplexResult:
        def objective(x: np.ndarray) -> float:
            return self.configuration_energy(problem.boundary, _positions(x), problem.charges, problem.formulation)

        return nelder_mead(
            objective,
            self._start(problem, index),
            step=problem.step,
            tol=problem.tolerance,
            max_evaluations=problem.max_evaluations,
            restarts=settings.SIMPLEX_RESTARTS,
            project=self._project(problem.radius_limit),
        )

    def projected_gradient(
        self,
        problem: MinimizeProblem,
        positions: Sequence[complex],
        step: float = settings.FINITE_DIFFERENCE_STEP
    ) -> float:
        """
        Norm of the central-difference position gradient; on the clamp circle
        the outward-descending radial component is removed.
        """
        x = _flatten(positions)
        gradient = np.zeros_like(x)
        for i in range(x.size):
            forward, backward = x.copy(), x.copy()
            forward[i] += step
            backward[i] -= step
            gradient[i] = (
                self.configuration_energy(problem.boundary, _positions(forward), problem.charges, problem.formulation)
                - self.configuration_energy(problem.boundary, _positions(backward), problem.charges, problem.formulation)
            ) / (2.0 * step)
        gradient = gradient.reshape(-1, 2)
        for i, p in enumerate(positions):
            if abs(p) >= problem.radius_limit - 1e-9:
                normal = np.array([p.real, p.imag]) / abs(p)
                radial = float(gradient[i] @ normal)
                if radial < 0.0:
                    gradient[i] = gradient[i] - radial * normal
        return float(np.linalg.norm(gradient))

    def minimize_positions(self, problem: MinimizeProblem, threads: int = 1) -> MinimizeResult:
        """
        Seeded multistart Nelder-Mead over positions in |p| <= 1 - margin.

        Starts run in parallel; the result with the lowest energy wins, ties
        broken lexicographically on positions.
        """
        self._check_degree(problem.boundary, problem.charges)
        if not problem.charges:
            energy = self.configuration_energy(problem.boundary, (), (), problem.formulation)
            trace = (TraceEntry(1, (), energy),)
            return MinimizeResult((), (), energy, 1, trace, "empty", 0.0, 0, [energy])

        with ThreadPoolExecutor(max_workers=max(1, threads)) as executor:
            runs = list(executor.map(lambda i: self._run(problem, i), range(problem.restarts)))

        best_index = min(
            range(len(runs)),
            key=lambda i: (runs[i].score, _position_key(_positions(runs[i].x)))
        )
        best = runs[best_index]
        positions = _positions(best.x)
        trace = tuple(TraceEntry(e, _positions(x), s) for e, x, s in best.history)
        if best.terminated_by == "budget":
            logger.warning(
                f"[MinimizeService] Evaluation budget {problem.max_evaluations} spent; reporting best so far"
            )
        gradient_norm = self.projected_gradient(problem, positions)
        on_clamp = sum(1 for p in positions if abs(p) >= problem.radius_limit - 1e-9)
        logger.info(
            f"[MinimizeService] Best energy {best.score:.12g} from start {best_index}, "
            f"{on_clamp} of {len(positions)} vortices on the clamp circle, gradient {gradient_norm:.3e}"
        )
        return MinimizeResult(
            positions=positions,
            charges=problem.charges,
            energy=best.score,
            evaluations=sum(run.evaluations for run in runs),
            trace=trace,
            terminated_by=best.terminated_by,
            gradient_norm=gradient_norm,
            start_index=best_index,
            starts=[run.score for run in runs],
        )

    def radial_oracle(self, problem: MinimizeProblem, angle: float = 0.0) -> Tuple[float, float]:
        """Bounded scalar minimization of the single-vortex energy along a ray; returns (radius, energy)."""
        if len(problem.charges) != 1:
            raise ValidationException("the radial oracle needs exactly one vortex")
        direction = np.exp(1j * angle)

        def energy(radius: float) -> float:
            return self.configuration_energy(
                problem.boundary, (radius * direction,), problem.charges, problem.formulation
            )

        result = minimize_scalar(
            energy,
            bounds=(0.0, problem.radius_limit),
            method="bounded",
            options={"xatol": problem.tolerance},
        )
        candidates = [(float(result.x), float(result.fun)), (problem.radius_limit, energy(problem.radius_limit))]
        return min(candidates, key=lambda item: item[1])

    def compare_partitions(
        self,
        problem: MinimizeProblem,
        max_vortices: int,
        threads: int = 1
    ) -> List[Dict[str, object]]:
        """Minimize for every charge partition of the boundary degree; observations only."""
        _, degree = MapService.boundary_lift(problem.boundary)
        rows = []
        for charges in enumerate_partitions(degree, max_vortices):
            variant = MinimizeProblem(
                boundary=problem.boundary,
                charges=charges,
                margin=problem.margin,
                max_evaluations=problem.max_evaluations,
                restarts=problem.restarts,
                seed=problem.seed,
                step=problem.step,
                tolerance=problem.tolerance,
                formulation=problem.formulation,
            )
            result = self.minimize_positions(variant, threads)
            rows.append({"charges": list(charges), "energy": result.energy, "evaluations": result.evaluations})
            logger.info(f"[MinimizeService] Partition {list(charges)}: energy {result.energy:.8g}")
        return rows
