"""Command routing shared by the controllers."""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Sequence

from app.core.config import settings
from app.core.exceptions import ValidationException
from app.models.grid import BoundarySignal, PolarGrid
from app.models.vortex import SingularMap
from app.schemas.problem import ProblemConfig
from app.schemas.report import CommandResult
from app.services.grid_service import GridService
from app.services.map_service import MapService

logger = logging.getLogger('vortexlab_router')


@dataclass(frozen=True)
class CommandContext:
    """Validated config plus the process-level flags a handler may need."""
    config: ProblemConfig
    threads: int = settings.DEFAULT_THREADS

    @property
    def seed(self) -> int:
        return self.config.seed

    @property
    def options(self):
        return self.config.options

    @property
    def resolution(self):
        return self.config.grid.radial, self.config.grid.angular

    def require_domain(self, *domains: str) -> None:
        if self.config.domain not in domains:
            raise ValidationException(
                f"config field 'domain': command needs {' or '.join(domains)}, got {self.config.domain}"
            )

    def disk_grid(self, centers: Sequence[complex] = ()) -> PolarGrid:
        radial, angular = self.resolution
        return GridService.build_polar_grid(radial, angular, centers=tuple(centers))

    def disk_map(self) -> SingularMap:
        vortices = self.config.vortex_config()
        return MapService.make_singular_map(vortices, self.config.smooth_phase(), self.config.grid.angular)

    def boundary_signal(self, fallback: SingularMap = None) -> BoundarySignal:
        """The configured boundary data, else the trace of `fallback`."""
        if self.config.boundary is not None:
            return self.config.boundary.to_signal()
        if fallback is not None and fallback.trace is not None:
            return fallback.trace
        raise ValidationException("config field 'boundary': boundary data is required for this command")


CommandHandler = Callable[[CommandContext], CommandResult]


class CommandRouter:
    """Registry of command handlers, included into the application router."""

    def __init__(self, tags: str = ""):
        self.tags = tags
        self.routes: Dict[str, CommandHandler] = {}

    def command(self, name: str):
        def decorator(handler: CommandHandler) -> CommandHandler:
            if name in self.routes:
                raise ValueError(f"command {name!r} registered twice")
            self.routes[name] = handler
            return handler
        return decorator

    def include_router(self, router: "CommandRouter") -> None:
        for name, handler in router.routes.items():
            if name in self.routes:
                raise ValueError(f"command {name!r} registered twice")
            self.routes[name] = handler

    @property
    def commands(self):
        return sorted(self.routes)

    def dispatch(self, name: str, context: CommandContext) -> CommandResult:
        if name not in self.routes:
            raise ValidationException(f"unknown command {name!r}; expected one of {', '.join(self.commands)}")
        logger.info(f"[CommandRouter] Running {name}")
        return self.routes[name](context)
