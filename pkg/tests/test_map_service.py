import numpy as np
import pytest

from app.core.exceptions import (
    DomainException,
    UnresolvedSamplingException,
    ValidationException,
)
from app.models.grid import BoundarySignal
from app.models.vortex import SmoothPhase, Vortex, VortexConfig
from app.services.grid_service import GridService
from app.services.map_service import MapService
from app.utils.potentials import log_potential
from tests.helpers import make_map


def _uniform_service(radial=64, angular=128):
    grid = GridService.build_uniform_grid(radial, angular, angle_offset=np.pi / angular)
    return MapService(grid)


def test_single_vortex_evaluates_to_unit_direction(single_vortex):
    z = np.array([0.5 + 0.5j, -0.2 + 0j])
    assert np.allclose(MapService.evaluate_g(single_vortex, z), z / np.abs(z))


def test_evaluation_at_vortex_is_a_domain_error(single_vortex):
    with pytest.raises(DomainException):
        MapService.evaluate_g(single_vortex, np.array([0j]))


def test_connection_of_single_vortex(single_vortex):
    z = 0.5 + 0j
    # omega = grad-perp log|z| = (0, 1/r) on the positive axis
    assert MapService.connection(single_vortex, z) == pytest.approx(2.0j)


def test_trace_degree_matches_total_charge(blaschke_pair, single_vortex):
    assert MapService.winding_number(blaschke_pair.trace.samples) == 0
    assert MapService.winding_number(single_vortex.trace.samples) == 1


def test_winding_of_negative_degree_loop():
    angles = 2 * np.pi * np.arange(256) / 256
    assert MapService.winding_number(np.exp(-3j * angles)) == -3


def test_winding_of_undersampled_loop_is_unresolved():
    angles = 2 * np.pi * np.arange(8) / 8
    with pytest.raises(UnresolvedSamplingException):
        MapService.winding_number(np.exp(4j * angles))


def test_boundary_lift_starts_at_zero():
    trace = BoundarySignal.from_function(lambda t: np.exp(1j * (2 * t + 0.3 * np.sin(t))), 256, kind="unit")
    lift, degree = MapService.boundary_lift(trace)
    assert degree == 2
    assert lift.samples[0] == 0.0
    assert np.allclose(np.exp(1j * lift.samples) * trace.samples[0], trace.samples)


def test_total_variation_of_perturbed_degree_two():
    trace = BoundarySignal.from_function(lambda t: np.exp(1j * (2 * t + 0.3 * np.sin(t))), 256, kind="unit")
    assert MapService.total_variation(trace) == pytest.approx(4 * np.pi, abs=1e-3)


def test_lift_derivative_integrates_to_degree():
    trace = BoundarySignal.from_function(lambda t: np.exp(1j * (t + 0.2 * np.cos(3 * t))), 128, kind="unit")
    derivative = MapService.lift_derivative(trace)
    assert derivative.integral() == pytest.approx(2 * np.pi, abs=1e-10)
    expected = 1.0 - 0.6 * np.sin(3 * derivative.angles)
    assert np.allclose(derivative.samples, expected, atol=1e-10)


def test_boundary_lift_needs_unit_signal():
    with pytest.raises(ValidationException):
        MapService.boundary_lift(BoundarySignal(np.zeros(16)))


def test_log_potential_value_and_gradient():
    values, gradients = log_potential(np.array([0j]), np.array([1]), np.array([0.5 + 0j]))
    assert values[0] == pytest.approx(np.log(0.5))
    assert gradients[0] == pytest.approx(2.0 + 0j)


def test_boundary_vortex_needs_even_charge():
    with pytest.raises(ValidationException):
        VortexConfig((Vortex(1.0 + 0j, 1),))


def test_zero_charge_rejected():
    with pytest.raises(ValidationException):
        VortexConfig((Vortex(0.2 + 0j, 0),))


def test_coincident_vortices_rejected():
    with pytest.raises(ValidationException):
        VortexConfig((Vortex(0.2 + 0j, 1), Vortex(0.2 + 0j, -1)))


def test_boundary_charge_counts_half():
    vortices = VortexConfig((Vortex(0.0 + 0j, 1), Vortex(1.0 + 0j, 2)))
    assert vortices.total_charge() == 2
    assert list(vortices.effective_charges) == [1.0, 1.0]


def test_boundary_vortex_map_has_matching_degree():
    singular_map = make_map([(1.0, 0.0, 2)])
    assert MapService.winding_number(singular_map.trace.samples) == 1


def test_phase_degree_must_fit_boundary_samples():
    phase = SmoothPhase.from_coefficients({(8, 0): 1.0})
    with pytest.raises(ValidationException):
        MapService.make_singular_map(VortexConfig(), phase, 16)


def test_phase_degree_cap():
    with pytest.raises(ValidationException):
        SmoothPhase.from_coefficients({(12, 0): 1.0})


def test_detects_blaschke_pair(blaschke_pair):
    service = _uniform_service()
    service.check_resolution(blaschke_pair)
    found = service.detect_singularities(service.sample_map(blaschke_pair))
    assert sorted(found.charges.tolist()) == [-1, 1]
    negative = found.positions[found.charges < 0][0]
    positive = found.positions[found.charges > 0][0]
    assert abs(negative - (-0.3)) < 0.05
    assert abs(positive - 0.3) < 0.05


def test_detects_charge_at_origin():
    singular_map = make_map([(0.0, 0.0, 2)])
    service = _uniform_service()
    found = service.detect_singularities(service.sample_map(singular_map))
    assert found.charges.tolist() == [2]
    assert abs(found.positions[0]) < 1e-12


def test_detected_charges_sum_to_trace_degree(seeded_family):
    service = _uniform_service()
    for singular_map in seeded_family:
        service.check_resolution(singular_map)
        found = service.detect_singularities(service.sample_map(singular_map))
        assert found.total_charge() == singular_map.vortices.total_charge()


def test_close_vortices_are_unresolved_on_coarse_grid():
    singular_map = make_map([(0.5, 0.0, 1), (0.52, 0.0, -1)], boundary_count=16)
    service = _uniform_service(8, 16)
    with pytest.raises(UnresolvedSamplingException) as excinfo:
        service.check_resolution(singular_map)
    assert excinfo.value.cell is not None


def test_detection_rejects_wrong_shape():
    service = _uniform_service(8, 16)
    with pytest.raises(ValidationException):
        service.detect_singularities(np.ones((4, 4), dtype=complex))


def test_seeded_family_is_reproducible():
    first = MapService.seeded_family(7, 3, boundary_count=128)
    second = MapService.seeded_family(7, 3, boundary_count=128)
    for a, b in zip(first, second):
        assert np.array_equal(a.vortices.positions, b.vortices.positions)
        assert a.phase.coefficients == b.phase.coefficients
