import numpy as np
import pytest

from app.core.exceptions import ValidationException
from app.models.torus import TorusMap, TrigTerm
from app.services.torus_service import TorusService

DIPOLE = TorusMap(positions=(0.3 + 0.5j, 0.7 + 0.5j), charges=(1, -1))


@pytest.fixture(scope="module")
def service():
    return TorusService(truncation=8)


@pytest.mark.parametrize("winding", [(1, 0), (0, 1), (1, 1), (2, 1)])
def test_pure_winding_energy(service, winding):
    m, n = winding
    breakdown = service.torus_energy(TorusMap(winding=winding))
    assert breakdown.total == pytest.approx(np.pi ** 2 * (m * m + n * n), abs=1e-8)
    assert breakdown.weighted_term == pytest.approx(0.0, abs=1e-12)


def test_windings_are_interchangeable(service):
    horizontal = service.torus_energy(TorusMap(winding=(1, 0))).total
    vertical = service.torus_energy(TorusMap(winding=(0, 1))).total
    assert horizontal == pytest.approx(vertical, abs=1e-12)


def test_trigonometric_phase_energy(service):
    breakdown = service.torus_energy(TorusMap(terms=(TrigTerm(0.5, 1, 0, "cos"),)))
    # grad b = -pi sin(2 pi x) e_x; f(0) = 1/4
    assert breakdown.b_term == pytest.approx(np.pi ** 2 / 8, rel=1e-10)
    assert breakdown.weighted_term == pytest.approx(np.pi ** 2 / 8, rel=1e-10)
    assert breakdown.h_term == 0.0


def test_dipole_decomposition(service):
    parts = service.torus_decompose(DIPOLE)
    assert parts.h == (0.0, 0.0)
    assert parts.a_modes[service.truncation, service.truncation] == 0
    assert abs(np.mean(parts.a)) <= 1e-12
    assert parts.a.shape == (service.size, service.size)


def test_dipole_energy_terms_agree(service):
    breakdown = service.torus_energy(DIPOLE)
    assert breakdown.total > 0.0
    assert breakdown.lift_term == pytest.approx(breakdown.weighted_term, rel=1e-12)


def test_truncation_convergence_report(service):
    coarse, fine, change = service.torus_convergence(DIPOLE)
    assert np.isfinite(coarse) and np.isfinite(fine)
    assert change == pytest.approx(abs(fine - coarse) / max(1.0, abs(fine)))


def test_positions_wrap_into_unit_cell():
    torus_map = TorusMap(positions=(1.25 + 0.5j, -0.25 + 0.5j), charges=(1, -1))
    assert torus_map.positions == (0.25 + 0.5j, 0.75 + 0.5j)


def test_nonzero_total_charge_rejected():
    with pytest.raises(ValidationException):
        TorusMap(positions=(0.2 + 0.2j,), charges=(1,))


def test_bad_trigonometric_term_rejected():
    with pytest.raises(ValidationException):
        TorusMap(terms=(TrigTerm(1.0, 1, 0, "tan"),))
    with pytest.raises(ValidationException):
        TorusMap(terms=(TrigTerm(1.0, 40, 0, "cos"),))


def test_truncation_must_be_positive():
    with pytest.raises(ValidationException):
        TorusService(truncation=0)
