import numpy as np
import pytest

from app.core.exceptions import DegreeMismatchException, ValidationException
from app.models.vortex import Vortex, VortexConfig
from app.services.bounds_service import (
    BoundsService,
    f_distributed_levels,
    quasinorm_constant,
    weak_l2_quasinorm,
)
from app.services.grid_service import GridService
from tests.helpers import boundary

SINGLE_A_ENERGY = np.pi * np.e / (np.e + 1.0)


@pytest.fixture(scope="module")
def centered_bounds(centered_grid):
    return BoundsService(centered_grid)


def test_count_bound_for_single_vortex(centered_bounds, single_vortex):
    report = centered_bounds.vortex_count_bound(single_vortex, centered_bounds.hodge.decompose(single_vortex))
    assert report.lhs == pytest.approx(np.pi)
    assert report.rhs == pytest.approx(np.pi + SINGLE_A_ENERGY, abs=1e-4)
    assert report.holds
    assert report.secondary.holds
    assert report.secondary.lhs == 1.0


def test_count_bound_over_family(seeded_family):
    for singular_map in seeded_family:
        bounds = BoundsService(GridService.build_polar_grid(64, 128, centers=tuple(singular_map.vortices.positions)))
        report = bounds.vortex_count_bound(singular_map, bounds.hodge.decompose(singular_map))
        assert report.holds and report.secondary.holds


def test_level_flux_at_zero(centered_bounds, single_vortex):
    parts = centered_bounds.hodge.decompose(single_vortex)
    report = centered_bounds.level_set_flux(single_vortex, parts, 0.0)
    assert report.flux == pytest.approx(2 * np.pi, rel=0.02)
    assert report.rhs == pytest.approx(2 * np.pi)
    assert report.contour_count >= 1


def test_level_above_boundary_values_is_empty(centered_bounds, single_vortex):
    parts = centered_bounds.hodge.decompose(single_vortex)
    report = centered_bounds.level_set_flux(single_vortex, parts, 1.0)
    assert report.flux == 0.0
    assert report.rhs == pytest.approx(0.0, abs=1e-10)


def test_flux_sweep_over_random_levels(centered_bounds, single_vortex):
    parts = centered_bounds.hodge.decompose(single_vortex)
    levels = [t for t in f_distributed_levels(3, 6).tolist() if t < 0.4]
    for report in centered_bounds.flux_sweep(single_vortex, parts, levels):
        assert report.relative_gap <= 0.02


def test_levels_are_reproducible():
    assert np.array_equal(f_distributed_levels(5, 8), f_distributed_levels(5, 8))
    assert abs(np.mean(f_distributed_levels(0, 20000))) < 0.05


def test_quasinorm_of_constant(coarse_grid):
    values = np.full(coarse_grid.shape, 3.0)
    assert weak_l2_quasinorm(values, coarse_grid.quadrature_weights) == pytest.approx(3.0 * np.sqrt(np.pi))


def test_quasinorm_of_zero(coarse_grid):
    assert weak_l2_quasinorm(np.zeros(coarse_grid.shape), coarse_grid.quadrature_weights) == 0.0


def test_quasinorm_of_inverse_radius(centered_grid):
    values = 1.0 / np.abs(centered_grid.points)
    assert weak_l2_quasinorm(values, centered_grid.quadrature_weights) == pytest.approx(np.sqrt(np.pi), rel=0.05)


def test_quasinorm_needs_matching_weights():
    with pytest.raises(ValidationException):
        weak_l2_quasinorm(np.ones(4), np.ones(3))


def test_quasinorm_constant():
    assert quasinorm_constant([(1.0, 1.0, 1.0), (3.0, 1.0, 0.5)]) == pytest.approx(2.0)
    assert quasinorm_constant([(1.0, 0.0, 0.0)]) == 0.0


def test_extension_reproduces_boundary_data():
    trace = boundary("identity")
    extension = BoundsService.extend_boundary(trace, 1)
    z = np.array([0.5 + 0.5j, -0.1 + 0.7j])
    assert np.allclose(extension.evaluate(z), z / np.abs(z), atol=1e-12)


def test_extension_of_constant_data_is_constant():
    extension = BoundsService.extend_boundary(boundary("constant"), 0)
    assert len(extension.vortices) == 0
    assert np.allclose(extension.evaluate(np.array([0.2 + 0.3j])), 1.0)


def test_extension_degree_mismatch():
    with pytest.raises(DegreeMismatchException):
        BoundsService.extend_boundary(boundary("identity"), 2)


def test_extension_energy_bound(centered_bounds):
    report = centered_bounds.extension_energy_bound(boundary("identity"), 1)
    assert report.lhs == pytest.approx(2 * 2 * np.pi * np.e / (np.e + 1), abs=1e-3)
    assert report.rhs == pytest.approx(np.pi ** 3 + 4 * np.pi, rel=1e-6)
    assert report.holds


def test_extension_without_vortices_is_holomorphic(disk_grid):
    bounds = BoundsService(disk_grid)
    extension = BoundsService.extend_boundary(boundary("small_sine"), 0)
    parts = bounds.hodge.decompose(extension)
    assert bounds.hodge.dbar_residual(extension, parts)["residual"] <= 1e-8


def test_stability_path_must_stay_in_disk(coarse_grid):
    bounds = BoundsService(coarse_grid)
    vortices = VortexConfig((Vortex(0j, 1),))
    with pytest.raises(ValidationException):
        bounds.stability_sweep(boundary("identity", 64), vortices, 0, [1.5 + 0j])
    with pytest.raises(ValidationException):
        bounds.stability_sweep(boundary("identity", 64), vortices, 3, [0.5 + 0j])


@pytest.mark.slow
def test_stability_sweep_reaches_boundary_limit(disk_grid):
    bounds = BoundsService(disk_grid)
    path = [complex(1.0 - 2.0 ** -k, 0.0) for k in range(1, 11)]
    sweep = bounds.stability_sweep(boundary("identity"), VortexConfig((Vortex(0j, 1),)), 0, path, 1.0 + 0j, threads=4)
    assert sweep.limit_charge == 2
    assert sweep.final_gap <= 0.01
    assert sweep.converged
