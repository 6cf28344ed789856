import numpy as np
import pytest

from app.core.exceptions import DegreeMismatchException, ValidationException
from app.models.minimize import MinimizeProblem
from app.services.minimize_service import MinimizeService, enumerate_partitions
from app.utils.nelder_mead import nelder_mead
from tests.helpers import SINGLE_VORTEX_ENERGY, boundary


@pytest.fixture(scope="module")
def service():
    return MinimizeService()


def test_energy_of_centered_vortex():
    energy = MinimizeService((128, 256)).configuration_energy(boundary("identity"), [0j], [1])
    assert energy == pytest.approx(SINGLE_VORTEX_ENERGY, abs=1e-4)


def test_energy_is_rotation_invariant(service):
    trace = boundary("identity", 128)
    first = service.configuration_energy(trace, [0.5 + 0j], [1])
    second = service.configuration_energy(trace, [0.5j], [1])
    assert first == pytest.approx(second, abs=1e-6)


def test_energy_decreases_toward_the_circle(service):
    trace = boundary("identity", 128)
    energies = [service.configuration_energy(trace, [complex(r, 0.0)], [1]) for r in (0.0, 0.25, 0.5, 0.75)]
    assert energies == sorted(energies, reverse=True)
    assert energies[0] == pytest.approx(SINGLE_VORTEX_ENERGY, abs=1e-3)
    assert energies[2] == pytest.approx(4.0171, abs=1e-3)
    problem = MinimizeProblem(boundary=trace, charges=(1,))
    _, oracle_energy = service.radial_oracle(problem)
    assert oracle_energy < energies[-1]


def test_infeasible_positions_are_infinite(service):
    trace = boundary("double", 128)
    assert service.configuration_energy(trace, [0.2 + 0j, 0.2 + 0j], [1, 1]) == np.inf
    assert service.configuration_energy(trace, [1.2 + 0j, 0.2 + 0j], [1, 1]) == np.inf


def test_mirror_and_conjugate_formulations_agree(service):
    trace = boundary("wobble", 128)
    mirror = service.configuration_energy(trace, [0.2 + 0.1j], [1], "mirror")
    conjugate = service.configuration_energy(trace, [0.2 + 0.1j], [1], "conjugate")
    assert mirror == pytest.approx(conjugate, rel=1e-6)


def test_no_charges_gives_zero_energy(service):
    result = service.minimize_positions(MinimizeProblem(boundary=boundary("constant", 128), charges=()))
    assert result.energy == pytest.approx(0.0, abs=1e-12)
    assert result.terminated_by == "empty"
    assert result.positions == ()


def test_charges_must_match_degree(service):
    with pytest.raises(DegreeMismatchException):
        service.minimize_positions(MinimizeProblem(boundary=boundary("identity", 128), charges=(1, 1)))


def test_problem_validation():
    with pytest.raises(ValidationException):
        MinimizeProblem(boundary=boundary("identity", 64), charges=(1,), margin=0.6)
    with pytest.raises(ValidationException):
        MinimizeProblem(boundary=boundary("identity", 64), charges=(0, 1))
    with pytest.raises(ValidationException):
        MinimizeProblem(boundary=boundary("identity", 64), charges=(1,), formulation="direct")


def test_minimization_is_deterministic():
    problem = MinimizeProblem(boundary=boundary("identity", 64), charges=(1,), max_evaluations=60, restarts=2, seed=4)
    service = MinimizeService((32, 64))
    first = service.minimize_positions(problem, threads=2)
    second = service.minimize_positions(problem, threads=1)
    assert first.energy == second.energy
    assert first.positions == second.positions
    assert first.energy == min(first.starts)
    assert all(abs(p) <= problem.radius_limit + 1e-12 for p in first.positions)
    assert [row["energy"] for row in first.rows()] == sorted((row["energy"] for row in first.rows()), reverse=True)


def test_enumerate_partitions():
    assert enumerate_partitions(2, 2) == [(2,), (1, 1)]
    assert enumerate_partitions(0, 2) == [(), (2, -2), (1, -1)]
    assert enumerate_partitions(0, 2, max_charge=1) == [(), (1, -1)]
    assert (2, -1) in enumerate_partitions(1, 2)
    with pytest.raises(ValidationException):
        enumerate_partitions(1, -1)


def test_simplex_finds_quadratic_minimum():
    result = nelder_mead(lambda x: float(np.sum((x - 0.3) ** 2)), np.zeros(2), tol=1e-8)
    assert result.terminated_by == "diameter"
    assert np.allclose(result.x, [0.3, 0.3], atol=1e-6)


def test_simplex_respects_projection_and_budget():
    result = nelder_mead(
        lambda x: float(np.sum((x - 2.0) ** 2)),
        np.zeros(2),
        max_evaluations=40,
        project=lambda x: np.clip(x, -1.0, 1.0),
    )
    assert result.evaluations <= 44
    assert np.all(np.abs(result.x) <= 1.0)


def test_simplex_restarts_from_best_vertex():
    def objective(x):
        return float(np.sum((x - 0.3) ** 2))

    plain = nelder_mead(objective, np.zeros(2), tol=1e-8)
    restarted = nelder_mead(objective, np.zeros(2), tol=1e-8, restarts=2)
    assert plain.restarts == 0
    assert 1 <= restarted.restarts <= 2
    assert restarted.terminated_by == "diameter"
    assert restarted.evaluations > plain.evaluations
    assert restarted.score <= plain.score
    assert np.allclose(restarted.x, [0.3, 0.3], atol=1e-6)


def test_restart_escapes_a_collapsed_simplex():
    # projection pins the first simplex to a line; the rebuilt simplex leaves it
    calls = {"count": 0}

    def project(x):
        calls["count"] += 1
        return np.array([x[0], 0.0]) if calls["count"] <= 3 else x

    result = nelder_mead(lambda x: float(np.sum((x - 0.3) ** 2)), np.zeros(2), tol=1e-8, restarts=3, project=project)
    assert result.restarts >= 1
    assert np.allclose(result.x, [0.3, 0.3], atol=1e-6)


@pytest.mark.slow
def test_single_vortex_matches_radial_oracle(service):
    problem = MinimizeProblem(boundary=boundary("identity", 128), charges=(1,), seed=0)
    result = service.minimize_positions(problem, threads=4)
    radius, oracle_energy = service.radial_oracle(problem)
    assert radius > 0.5
    assert result.energy == pytest.approx(oracle_energy, abs=1e-3)
    assert result.energy < service.configuration_energy(problem.boundary, [0j], [1])


def _pair_oracle(service, trace, radii=(0.7, 0.8, 0.9), separations=(0.4, 0.5, 0.6, 0.7, 0.8, 1.0)):
    """Least energy over pairs r e^{+-i pi s / 2}."""
    best = np.inf
    for r in radii:
        for s in separations:
            half = np.exp(0.5j * np.pi * s)
            best = min(best, service.configuration_energy(trace, [r * half, r * np.conj(half)], [1, 1]))
    return best


@pytest.mark.slow
def test_double_vortices_match_pair_oracle(service):
    problem = MinimizeProblem(boundary=boundary("double", 128), charges=(1, 1), seed=0)
    result = service.minimize_positions(problem, threads=4)
    assert result.energy <= _pair_oracle(service, problem.boundary) + 1e-3
    antipodal = service.configuration_energy(problem.boundary, [0.9 + 0j, -0.9 + 0j], [1, 1])
    assert result.energy < antipodal
