"""Minimization command: vortex positions of least energy for fixed boundary data."""

import logging

import numpy as np

from app.core.config import settings
from app.models.minimize import MinimizeProblem
from app.schemas.report import CommandResult
from app.services.map_service import MapService
from app.services.minimize_service import MinimizeService
from .router import CommandContext, CommandRouter

logger = logging.getLogger('vortexlab_minimize_controller')

minimize_router = CommandRouter(tags="Minimize")


@minimize_router.command("minimize")
def minimize(context: CommandContext) -> CommandResult:
    """
    Charges come from `options.charges`, else from the configured vortices,
    else a single vortex carrying the boundary degree. Runs at the minimization
    resolution unless the config sets a grid.
    """
    context.require_domain("disk")
    config = context.config
    options = context.options
    trace = context.boundary_signal(context.disk_map() if config.boundary is None else None)
    _, degree = MapService.boundary_lift(trace)
    charges = tuple(options.charges) or tuple(v.charge for v in config.vortices) or ((degree,) if degree else ())

    problem = MinimizeProblem(
        boundary=trace,
        charges=charges,
        margin=options.margin,
        max_evaluations=options.max_evaluations,
        restarts=options.restarts,
        seed=context.seed,
        step=options.step,
        tolerance=options.tolerance,
        formulation=options.formulation,
    )
    resolution = context.resolution if "grid" in config.model_fields_set else settings.MINIMIZE_RESOLUTION
    service = MinimizeService(resolution)
    result = service.minimize_positions(problem, context.threads)

    results = {
        "charges": list(result.charges),
        "positions": [[p.real, p.imag] for p in result.positions],
        "energy": result.energy,
        "evaluations": result.evaluations,
        "terminated_by": result.terminated_by,
        "budget_exhausted": result.budget_exhausted,
        "gradient_norm": result.gradient_norm,
        "critical": bool(result.gradient_norm <= settings.GRADIENT_TOLERANCE),
        "start_index": result.start_index,
        "starts": result.starts,
        "resolution": list(resolution),
    }
    if len(charges) == 1:
        angle = float(np.angle(result.positions[0])) if abs(result.positions[0]) > 0.0 else 0.0
        radius, energy = service.radial_oracle(problem, angle)
        results["radial_oracle"] = {"radius": radius, "energy": energy, "gap": abs(result.energy - energy)}

    tables = {"trace": result.rows()}
    if options.partitions:
        tables["partitions"] = service.compare_partitions(problem, options.partitions, context.threads)
    return CommandResult(results=results, tables=tables)
