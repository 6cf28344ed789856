"""Service layer: one service per numerical concern."""

from .bounds_service import BoundsService
from .energy_service import EnergyService
from .grid_service import GridService
from .hodge_service import HodgeService
from .map_service import MapService
from .minimize_service import MinimizeService
from .selftest_service import SelfTestService
from .torus_service import TorusService

__all__ = [
    "BoundsService",
    "EnergyService",
    "GridService",
    "HodgeService",
    "MapService",
    "MinimizeService",
    "SelfTestService",
    "TorusService",
]
