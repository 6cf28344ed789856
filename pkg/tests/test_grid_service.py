import numpy as np
import pytest

from app.core.exceptions import ValidationException
from app.models.grid import BoundarySignal, DiskField
from app.services.grid_service import GridService
from app.utils.quadrature import radau_rule


def test_weights_sum_to_disk_area(coarse_grid):
    assert coarse_grid.quadrature_weights.sum() == pytest.approx(np.pi, abs=1e-8)


def test_last_radial_node_is_the_circle(coarse_grid):
    assert coarse_grid.radial_nodes[-1] == 1.0
    assert coarse_grid.shape == (32, 64)


def test_refinement_clusters_nodes_near_center():
    grid = GridService.build_polar_grid(32, 64, centers=(0.9 + 0j,))
    nodes = grid.radial_nodes
    share = np.count_nonzero((nodes >= 0.8) & (nodes <= 1.0)) / nodes.size
    assert share >= 0.25


@pytest.mark.parametrize("radial, angular", [(8, 17), (4, 64), (32, 8)])
def test_invalid_counts_rejected(radial, angular):
    with pytest.raises(ValidationException):
        GridService.build_polar_grid(radial, angular)


def test_center_outside_disk_rejected():
    with pytest.raises(ValidationException):
        GridService.build_polar_grid(32, 64, centers=(1.5 + 0j,))


def test_vortex_on_a_node_shifts_angles():
    grid = GridService.build_polar_grid(32, 64, centers=(1.0 + 0j,))
    assert grid.angle_offset == pytest.approx(np.pi / 64)
    assert np.min(grid.distance_to([1.0 + 0j])) > 1e-9


def test_second_moment(coarse_grid):
    value = GridService.integrate_disk(DiskField(coarse_grid, np.abs(coarse_grid.points) ** 2))
    assert value == pytest.approx(np.pi / 2, abs=1e-6)


def test_log_singularity_integrates(disk_grid):
    value = disk_grid.integrate(np.log(np.abs(disk_grid.points)))
    assert value == pytest.approx(-np.pi / 2, abs=1e-4)


def test_covector_fields_cannot_be_integrated(coarse_grid):
    field = DiskField.covector(coarse_grid, coarse_grid.x, coarse_grid.y)
    with pytest.raises(ValidationException):
        GridService.integrate_disk(field)


def test_nonfinite_field_rejected(coarse_grid):
    values = np.zeros(coarse_grid.shape)
    values[0, 0] = np.nan
    with pytest.raises(ValidationException):
        DiskField(coarse_grid, values)


def test_boundary_transform_modes():
    signal = GridService.boundary_transform(BoundarySignal.from_function(np.cos, 64))
    assert signal.mode(1) == pytest.approx(0.5, abs=1e-12)
    assert signal.mode(-1) == pytest.approx(0.5, abs=1e-12)
    assert signal.mode(0) == pytest.approx(0.0, abs=1e-12)
    assert np.max(np.abs(signal.inverse() - signal.samples)) <= 1e-12


def test_boundary_transform_rejects_odd_count():
    with pytest.raises(ValidationException):
        GridService.boundary_transform(BoundarySignal(np.ones(15)))


def test_unit_signal_must_lie_on_circle():
    with pytest.raises(ValidationException):
        BoundarySignal(np.full(16, 1.1 + 0j), kind="unit")


def test_radau_rule_is_exact_to_degree():
    nodes, weights = radau_rule(6)
    assert nodes[-1] == 1.0
    # 2n - 2 = 10 is the exactness degree
    assert np.sum(weights * nodes ** 10) == pytest.approx(2.0 / 11.0, abs=1e-13)


def test_plane_grid_reaches_truncation_radius():
    grid = GridService.build_plane_grid(20.0, (0.3 + 0j, -0.3 + 0j), 64, 128)
    assert grid.radial_nodes[-1] == 20.0
    assert grid.quadrature_weights.sum() == pytest.approx(400.0 * np.pi, rel=1e-10)


def test_plane_grid_rejects_short_truncation():
    with pytest.raises(ValidationException):
        GridService.build_plane_grid(1.0, (0.5 + 0j,), 64, 128)
