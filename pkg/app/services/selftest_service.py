"""Service running the invariant suite behind the `selftest` command."""

import logging
from typing import Callable, List, Tuple

import numpy as np

from app.config.presets import BOUNDARY_PRESETS, MAP_PRESETS, PLANE_PRESETS
from app.core.config import settings
from app.core.exceptions import VortexLabException
from app.models.minimize import MinimizeProblem
from app.models.selftest import InvariantCheck
from app.models.torus import TorusMap
from app.models.vortex import PhaseTerm, SingularMap, SmoothPhase, Vortex, VortexConfig
from app.schemas.problem import BoundarySpec
from app.services.bounds_service import BoundsService, f_distributed_levels_below
from app.services.energy_service import EnergyService
from app.services.grid_service import GridService
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from app.services.minimize_service import MinimizeService
from app.services.torus_service import TorusService
from app.utils.spectral import antiderivative_F

logger = logging.getLogger('vortexlab_selftest_service')

# (value, threshold, passed, detail)
Outcome = Tuple[float, float, bool, str]


def _preset_map(name: str, boundary_count: int) -> SingularMap:
    preset = MAP_PRESETS[name]
    vortices = VortexConfig.from_triples((v["x"], v["y"], v["charge"]) for v in preset["vortices"])
    phase = SmoothPhase(tuple(PhaseTerm(t["coefficient"], t["x_power"], t["y_power"]) for t in preset["phase"]))
    return MapService.make_singular_map(vortices, phase, boundary_count)


def _boundary(name: str, samples: int):
    return BoundarySpec(preset=name, samples=samples).to_signal()


class SelfTestService:
    """Runs every invariant check at one resolution and collects the outcomes."""

    def __init__(self, resolution: Tuple[int, int], seed: int = settings.DEFAULT_SEED, threads: int = 1):
        self.radial_count, self.angular_count = resolution
        self.seed = seed
        self.threads = threads

    def _grid(self, centers=()):
        return GridService.build_polar_grid(self.radial_count, self.angular_count, centers=tuple(centers))

    def _energy_service(self, singular_map: SingularMap) -> EnergyService:
        return EnergyService(self._grid(singular_map.vortices.positions))

    def weight_normalization(self) -> Outcome:
        gap = abs(float(antiderivative_F(40.0) - antiderivative_F(-40.0)) - 0.5)
        return gap, 1e-10, gap <= 1e-10, "int f = 1/2"

    def single_vortex_energy(self) -> Outcome:
        singular_map = _preset_map("single_vortex", self.angular_count)
        total = self._energy_service(singular_map).energy_of(singular_map).total
        expected = 2.0 * np.pi * np.e / (np.e + 1.0)
        gap = abs(total - expected)
        return gap, settings.ENERGY_ORACLE_TOLERANCE, gap <= settings.ENERGY_ORACLE_TOLERANCE, f"E = {total:.10g}"

    def gauge_identity(self) -> Outcome:
        singular_map = _preset_map("quadratic_phase", self.angular_count)
        service = self._energy_service(singular_map)
        parts = service.hodge.decompose(singular_map)
        report = service.gauge_project(singular_map, parts)
        gap = max(abs(report.energy - np.pi), report.residual)
        return gap, settings.ENERGY_ORACLE_TOLERANCE, gap <= settings.ENERGY_ORACLE_TOLERANCE, \
            f"E = {report.energy:.10g}, projected {report.projected_energy:.3e}"

    def _family(self, count: int = settings.SELFTEST_FAMILY_COUNT) -> List[SingularMap]:
        return MapService.seeded_family(self.seed, count, boundary_count=self.angular_count)

    def arctan_identity(self) -> Outcome:
        worst = 0.0
        for singular_map in self._family():
            service = self._energy_service(singular_map)
            parts = service.hodge.decompose(singular_map)
            total = service.renormalized_energy(singular_map, parts).total
            left, right = service.arctan_identity(singular_map, parts)
            worst = max(worst, abs(left - right) / max(1.0, abs(total)))
        return worst, settings.ENERGY_ORACLE_TOLERANCE, worst <= settings.ENERGY_ORACLE_TOLERANCE, "family"

    def el_biconditional(self) -> Outcome:
        mismatches = 0
        for singular_map in self._family():
            service = self._energy_service(singular_map)
            parts = service.hodge.decompose(singular_map)
            critical = service.el_residual(singular_map, parts) <= settings.EL_TOLERANCE
            exact_free = service.b_energy(parts) <= settings.B_ENERGY_TOLERANCE
            mismatches += int(critical != exact_free)
        return float(mismatches), 0.0, mismatches == 0, "critical <=> b = 0"

    def first_variation(self) -> Outcome:
        family = self._family(settings.SELFTEST_VARIATION_PAIRS)
        basis = EnergyService.variation_basis()
        worst = 0.0
        for index, singular_map in enumerate(family):
            check = self._energy_service(singular_map).first_variation_check(singular_map, basis[index % len(basis)])
            worst = max(worst, check.relative_gap)
        return worst, settings.VARIATION_TOLERANCE, worst <= settings.VARIATION_TOLERANCE, \
            f"{len(family)} (map, test) pairs"

    def conformality(self) -> Outcome:
        worst = 0.0
        for name in ("single_vortex", "blaschke_pair"):
            singular_map = _preset_map(name, self.angular_count)
            service = self._energy_service(singular_map)
            field = service.sphere_field(singular_map, service.hodge.decompose(singular_map))
            worst = max(worst, service.conformality_defect(field, singular_map.vortices.positions))
        return worst, settings.CONFORMALITY_TOLERANCE, worst <= settings.CONFORMALITY_TOLERANCE, "b = 0 lifts"

    def mirror_neumann(self) -> Outcome:
        rng = np.random.default_rng(self.seed)
        positions: List[complex] = []
        while len(positions) < 20:
            candidate = complex(0.9 * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform()))
            if all(abs(candidate - p) > 1e-3 for p in positions):
                positions.append(candidate)
        vortices = VortexConfig(tuple(Vortex(p, int(rng.choice([-1, 1]))) for p in positions))
        circle = np.exp(2j * np.pi * np.arange(256) / 256)
        _, gradient = HodgeService.mirror_potential(vortices, circle)
        residual = float(np.max(np.abs(np.real(np.conj(circle) * gradient))))
        return residual, settings.MIRROR_NEUMANN_TOLERANCE, residual <= settings.MIRROR_NEUMANN_TOLERANCE, "20 vortices"

    def count_bound(self) -> Outcome:
        failures = 0
        for singular_map in self._family(settings.SELFTEST_COUNT_BOUND_MAPS):
            bounds = BoundsService(self._grid(singular_map.vortices.positions))
            report = bounds.vortex_count_bound(singular_map, bounds.hodge.decompose(singular_map))
            failures += int(not (report.holds and report.secondary.holds))
        return float(failures), 0.0, failures == 0, "family"

    def flux_identity(self) -> Outcome:
        singular_map = _preset_map("single_vortex", self.angular_count)
        bounds = BoundsService(self._grid(singular_map.vortices.positions))
        parts = bounds.hodge.decompose(singular_map)
        levels = f_distributed_levels_below(self.seed, settings.SELFTEST_FLUX_LEVELS, settings.SELFTEST_FLUX_CEILING)
        reports = bounds.flux_sweep(singular_map, parts, levels.tolist())
        worst = max(r.relative_gap for r in reports)
        return worst, settings.FLUX_TOLERANCE, worst <= settings.FLUX_TOLERANCE, f"single vortex, {len(reports)} levels"

    def quasinorm(self) -> Outcome:
        singular_map = _preset_map("single_vortex", self.angular_count)
        radial, angular = settings.QUASINORM_RESOLUTION
        bounds = BoundsService(GridService.build_polar_grid(radial, angular, centers=(0j,)))
        value = bounds.gradient_quasinorm(bounds.hodge.decompose(singular_map))
        gap = abs(value - np.sqrt(np.pi)) / np.sqrt(np.pi)
        return gap, settings.QUASINORM_TOLERANCE, gap <= settings.QUASINORM_TOLERANCE, f"|grad a| quasinorm {value:.6g}"

    def extension_bound(self) -> Outcome:
        bounds = BoundsService(self._grid((0j,)))
        slack = min(
            bounds.extension_energy_bound(_boundary(name, self.angular_count), BOUNDARY_PRESETS[name]["degree"]).slack
            for name in ("identity", "double", "wobble")
        )
        return slack, 0.0, slack > 0.0, "minimum slack"

    def stability(self) -> Outcome:
        trace = _boundary("identity", self.angular_count)
        vortices = VortexConfig((Vortex(0j, 1),))
        path = [complex(1.0 - 2.0 ** -k, 0.0) for k in range(1, settings.STABILITY_STEPS + 1)]
        sweep = BoundsService(self._grid()).stability_sweep(trace, vortices, 0, path, 1.0 + 0j, self.threads)
        return sweep.final_gap, settings.STABILITY_GAP, sweep.converged, f"limit charge {sweep.limit_charge}"

    def torus_winding(self) -> Outcome:
        service = TorusService(settings.SELFTEST_TORUS_TRUNCATION)
        worst = 0.0
        for m, n in ((1, 0), (1, 1), (2, 1)):
            total = service.torus_energy(TorusMap(winding=(m, n))).total
            worst = max(worst, abs(total - np.pi ** 2 * (m * m + n * n)))
        return worst, settings.TORUS_ENERGY_TOLERANCE, worst <= settings.TORUS_ENERGY_TOLERANCE, "pure windings"

    def plane_quantization(self) -> Outcome:
        worst, passed, degrees = 0.0, True, []
        for name in ("pair", "double_pair"):
            preset = PLANE_PRESETS[name]
            p = [complex(x, y) for x, y in preset["p"]]
            q = [complex(x, y) for x, y in preset["q"]]
            charge = len(p)
            energy = EnergyService.plane_energy(
                p, q, settings.PLANE_TRUNCATION_RADIUS, self.radial_count, self.angular_count
            )
            gap = abs(energy - 2.0 * np.pi * charge) / (2.0 * np.pi * charge)
            degree = EnergyService.lift_degree(
                EnergyService.plane_lift(p, q, settings.PLANE_TRUNCATION_RADIUS, self.radial_count, self.angular_count)
            )
            worst = max(worst, gap)
            passed = passed and degree.rounded == charge and abs(degree.raw - charge) <= settings.DEGREE_TOLERANCE
            degrees.append(f"{degree.raw:.6f}")
        passed = passed and worst <= settings.PLANE_QUANTIZATION_TOLERANCE
        return worst, settings.PLANE_QUANTIZATION_TOLERANCE, passed, f"degrees {', '.join(degrees)}"

    def minimize_determinism(self) -> Outcome:
        problem = MinimizeProblem(
            boundary=_boundary("identity", 128), charges=(1,), max_evaluations=200, restarts=2, seed=self.seed
        )
        service = MinimizeService()
        first = service.minimize_positions(problem, self.threads)
        second = service.minimize_positions(problem, self.threads)
        gap = abs(first.energy - second.energy) + float(
            np.max(np.abs(np.array(first.positions) - np.array(second.positions)))
        )
        return gap, 0.0, gap == 0.0, f"E = {first.energy:.10g}"

    def checks(self) -> List[Tuple[str, Callable[[], Outcome]]]:
        return [
            ("weight_normalization", self.weight_normalization),
            ("single_vortex_energy", self.single_vortex_energy),
            ("gauge_identity", self.gauge_identity),
            ("arctan_identity", self.arctan_identity),
            ("el_biconditional", self.el_biconditional),
            ("first_variation", self.first_variation),
            ("conformality", self.conformality),
            ("mirror_neumann", self.mirror_neumann),
            ("count_bound", self.count_bound),
            ("flux_identity", self.flux_identity),
            ("quasinorm", self.quasinorm),
            ("extension_bound", self.extension_bound),
            ("stability", self.stability),
            ("torus_winding", self.torus_winding),
            ("plane_quantization", self.plane_quantization),
            ("minimize_determinism", self.minimize_determinism),
        ]

    def run(self) -> List[InvariantCheck]:
        results = []
        for name, check in self.checks():
            try:
                value, threshold, passed, detail = check()
            except VortexLabException as e:
                value, threshold, passed, detail = float("nan"), 0.0, False, f"{type(e).__name__}: {e}"
            results.append(InvariantCheck(name, float(value), float(threshold), bool(passed), detail))
            level = logging.INFO if passed else logging.ERROR
            logger.log(level, f"[SelfTestService] {name}: {'PASS' if passed else 'FAIL'} ({value:.3e}) {detail}")
        return results
