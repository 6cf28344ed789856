import numpy as np
import pytest

from app.core.exceptions import DomainException, IncompatibleDataException, ValidationException
from app.models.grid import BoundarySignal
from app.models.vortex import Vortex, VortexConfig
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from app.services.minimize_service import MinimizeService
from tests.helpers import boundary, make_map

PROBES = np.array([0.5 + 0j, 0.3 - 0.4j, -0.7 + 0.1j])


def test_harmonic_extension_of_cos_two_theta():
    field = HodgeService.harmonic_extension(BoundarySignal.from_function(lambda t: np.cos(2 * t), 64))
    assert field.value(0.5 + 0j) == pytest.approx(0.25, abs=1e-12)


def test_harmonic_conjugate_of_cos_two_theta():
    field = HodgeService.harmonic_conjugate(BoundarySignal.from_function(lambda t: np.cos(2 * t), 64))
    expected = np.abs(PROBES) ** 2 * np.sin(2 * np.angle(PROBES))
    assert np.allclose(field.value(PROBES), expected, atol=1e-12)
    assert field.value(0j) == pytest.approx(0.0, abs=1e-14)


def test_harmonic_extension_needs_real_signal():
    with pytest.raises(ValidationException):
        HodgeService.harmonic_extension(BoundarySignal(np.ones(16, dtype=complex), kind="unit"))


def test_poisson_solve_for_quadratic_phase(disk_grid, quadratic_phase):
    b = HodgeService(disk_grid).solve_b(quadratic_phase.phase)
    points = disk_grid.points
    assert np.max(np.abs(b.value(points) - (np.abs(points) ** 2 - 1.0))) <= 1e-6
    assert np.max(np.abs(b.value(np.exp(1j * disk_grid.boundary_angles)))) <= 1e-8


def test_finite_difference_scheme_agrees(disk_grid, quadratic_phase):
    b = HodgeService(disk_grid).solve_b(quadratic_phase.phase, scheme="finite_difference")
    assert np.max(np.abs(b.value(PROBES) - (np.abs(PROBES) ** 2 - 1.0))) <= 1e-3


def test_unknown_scheme_rejected(disk_grid, quadratic_phase):
    with pytest.raises(ValidationException):
        HodgeService(disk_grid).solve_b(quadratic_phase.phase, scheme="multigrid")


def test_single_vortex_potential(centered_grid, single_vortex):
    parts = HodgeService(centered_grid).decompose(single_vortex)
    assert np.allclose(parts.a.value(PROBES), np.log(np.abs(PROBES)) + 0.5, atol=1e-6)
    assert np.max(np.abs(parts.b.gradient(PROBES))) <= 1e-12


def test_linear_phase_potential(disk_grid):
    parts = HodgeService(disk_grid).decompose(make_map(coefficients={(1, 0): 1.0}))
    assert np.allclose(parts.a.value(PROBES), -PROBES.imag, atol=1e-8)
    assert np.max(np.abs(parts.b.value(PROBES))) <= 1e-10


def test_potential_has_zero_average(disk_grid, quadratic_phase):
    parts = HodgeService(disk_grid).decompose(quadratic_phase)
    assert abs(disk_grid.integrate(parts.a_field.values)) <= 1e-8


def test_reconstruction_matches_connection(disk_grid, dressed_vortex, blaschke_pair):
    service = HodgeService(disk_grid)
    for singular_map in (dressed_vortex, blaschke_pair):
        parts = service.decompose(singular_map)
        assert service.reconstruction_residual(singular_map, parts) <= 1e-6


def test_dbar_of_conformal_factor(disk_grid, single_vortex, quadratic_phase):
    service = HodgeService(disk_grid)
    holomorphic = service.dbar_residual(single_vortex, service.decompose(single_vortex))
    assert holomorphic["residual"] <= 1e-6
    skewed = service.dbar_residual(quadratic_phase, service.decompose(quadratic_phase))
    assert skewed["residual"] > 0.1
    assert skewed["agreement"] <= 1e-6


def test_mirror_potential_has_zero_normal_derivative():
    vortices = VortexConfig((Vortex(0.5 + 0j, 1),))
    circle = np.exp(2j * np.pi * np.arange(64) / 64)
    _, gradient = HodgeService.mirror_potential(vortices, circle)
    assert np.max(np.abs(np.real(np.conj(circle) * gradient))) <= 1e-10


def test_mirror_potential_outside_disk_rejected():
    vortices = VortexConfig((Vortex(0.5 + 0j, 1),))
    with pytest.raises(DomainException):
        HodgeService.mirror_potential(vortices, np.array([1.5 + 0j]))


def test_neumann_data_incompatible():
    vortices = VortexConfig((Vortex(0j, 1),))
    with pytest.raises(IncompatibleDataException) as excinfo:
        HodgeService.neumann_data(vortices, BoundarySignal(np.ones(64, dtype=complex), kind="unit"))
    assert abs(excinfo.value.defect) == pytest.approx(2 * np.pi, abs=1e-8)


def test_neumann_data_matches_decomposition(disk_grid, blaschke_pair):
    service = HodgeService(disk_grid)
    parts = service.decompose(blaschke_pair)
    data = HodgeService.neumann_data(blaschke_pair.vortices, blaschke_pair.trace)
    assert abs(data.defect) <= 1e-6
    assert service.remainder_neumann_gap(parts, data) <= 1e-6


def test_mirror_assembly_for_centered_vortex(centered_grid):
    a = HodgeService(centered_grid).mirror_assembly(VortexConfig((Vortex(0j, 1),)), boundary("identity"))
    assert np.allclose(a.value(PROBES), np.log(np.abs(PROBES)) + 0.5, atol=1e-6)


def test_mirror_assembly_matches_conjugate_formulation(disk_grid):
    trace = boundary("wobble")
    vortices = VortexConfig((Vortex(0.2 + 0.1j, 1),))
    mirror = HodgeService(disk_grid).mirror_assembly(vortices, trace)
    phase = MinimizeService._conjugate_map(trace, vortices).phase
    free = MapService.make_singular_map(vortices, phase, trace.count)
    conjugate = HodgeService(disk_grid).decompose(free).a
    assert np.allclose(mirror.gradient(PROBES), conjugate.gradient(PROBES), atol=1e-6)


def test_mirror_assembly_degree_mismatch(disk_grid):
    with pytest.raises(IncompatibleDataException):
        HodgeService(disk_grid).mirror_assembly(VortexConfig((Vortex(0j, 1),)), boundary("double"))
