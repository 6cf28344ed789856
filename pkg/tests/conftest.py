import pytest

from app.models.vortex import PhaseTerm, SmoothPhase
from app.services.grid_service import GridService
from app.services.map_service import MapService
from tests.helpers import make_map


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: acceptance-scale computation (deselect with -m 'not slow')")


@pytest.fixture(scope="session")
def disk_grid():
    return GridService.build_polar_grid(128, 256)


@pytest.fixture(scope="session")
def centered_grid():
    """Default grid refined at the origin."""
    return GridService.build_polar_grid(128, 256, centers=(0j,))


@pytest.fixture(scope="session")
def coarse_grid():
    return GridService.build_polar_grid(32, 64)


@pytest.fixture(scope="session")
def single_vortex():
    return make_map([(0.0, 0.0, 1)])


@pytest.fixture(scope="session")
def quadratic_phase():
    """g = exp(i |z|^2)"""
    return make_map(coefficients={(2, 0): 1.0, (0, 2): 1.0})


@pytest.fixture(scope="session")
def dressed_vortex():
    """g = z/|z| exp(i |z|^2)"""
    return make_map([(0.0, 0.0, 1)], {(2, 0): 1.0, (0, 2): 1.0})


@pytest.fixture(scope="session")
def blaschke_pair():
    return make_map([(0.3, 0.0, 1), (-0.3, 0.0, -1)])


@pytest.fixture(scope="session")
def seeded_family():
    return MapService.seeded_family(0, 4, boundary_count=256)


@pytest.fixture
def linear_phase():
    return SmoothPhase((PhaseTerm(1.0, 1, 0),))
