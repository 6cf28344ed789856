"""Controller layer: command handlers registered on routers."""

from .bounds import bounds_router
from .disk import disk_router
from .minimize import minimize_router
from .router import CommandContext, CommandRouter
from .selftest import selftest_router
from .torus import torus_router

__all__ = [
    "CommandContext",
    "CommandRouter",
    "bounds_router",
    "disk_router",
    "minimize_router",
    "selftest_router",
    "torus_router",
]
