"""Estimate commands: count bound, level-set flux, extension bound and stability sweeps."""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List

from app.core.config import settings
from app.core.exceptions import ValidationException
from app.models.vortex import SingularMap
from app.schemas.report import CommandResult
from app.services.bounds_service import BoundsService, f_distributed_levels, quasinorm_constant
from app.services.map_service import MapService
from .router import CommandContext, CommandRouter

logger = logging.getLogger('vortexlab_bounds_controller')

bounds_router = CommandRouter(tags="Bounds")


def _count_row(context: CommandContext, singular_map: SingularMap) -> Dict[str, float]:
    bounds = BoundsService(context.disk_grid(singular_map.vortices.positions))
    parts = bounds.hodge.decompose(singular_map)
    report = bounds.vortex_count_bound(singular_map, parts)
    return {
        "vortices": len(singular_map.vortices),
        "lhs": report.lhs,
        "rhs": report.rhs,
        "holds": report.holds and report.secondary.holds,
        "quasinorm": bounds.gradient_quasinorm(parts),
        "weighted_a": bounds.weighted_a_energy(parts),
        "variation": MapService.total_variation(singular_map.trace),
    }


@bounds_router.command("bound-check")
def bound_check(context: CommandContext) -> CommandResult:
    """
    Singularity count bound for the configured map; with `family_count` set,
    also over the seeded family, reporting the fitted weak-L2 constant.
    """
    context.require_domain("disk")
    singular_map = context.disk_map()
    bounds = BoundsService(context.disk_grid(singular_map.vortices.positions))
    parts = bounds.hodge.decompose(singular_map)
    report = bounds.vortex_count_bound(singular_map, parts)
    results = {
        **report.to_dict(),
        "quasinorm": bounds.gradient_quasinorm(parts),
        "weighted_a": bounds.weighted_a_energy(parts),
    }

    tables = {}
    count = context.options.family_count
    if count:
        _, angular = context.resolution
        family = MapService.seeded_family(context.seed, count, boundary_count=angular)
        with ThreadPoolExecutor(max_workers=max(1, context.threads)) as executor:
            rows = list(executor.map(lambda m: _count_row(context, m), family))
        failures = [i for i, row in enumerate(rows) if not row["holds"]]
        results["family"] = {
            "count": count,
            "all_hold": not failures,
            "failures": failures,
            "quasinorm_constant": quasinorm_constant(
                (row["quasinorm"], row["weighted_a"], row["variation"]) for row in rows
            ),
        }
        tables["family"] = rows
        logger.info(f"[BoundsController] Count bound holds on {count - len(failures)} of {count} maps")
    return CommandResult(results=results, tables=tables)


@bounds_router.command("level-flux")
def level_flux(context: CommandContext) -> CommandResult:
    """Flux of grad a through level sets against the co-area right-hand side."""
    context.require_domain("disk")
    options = context.options
    singular_map = context.disk_map()
    bounds = BoundsService(context.disk_grid(singular_map.vortices.positions))
    parts = bounds.hodge.decompose(singular_map)
    levels = options.levels or f_distributed_levels(context.seed, options.level_count).tolist()

    reports = bounds.flux_sweep(singular_map, parts, levels)
    rows: List[Dict[str, float]] = [
        {
            "level": r.level,
            "flux": r.flux,
            "rhs": r.rhs,
            "relative_gap": r.relative_gap,
            "contours": r.contour_count,
        }
        for r in reports
    ]
    worst = max((r.relative_gap for r in reports), default=0.0)
    return CommandResult(
        results={
            "levels": len(reports),
            "max_relative_gap": worst,
            "within_tolerance": bool(worst <= settings.FLUX_TOLERANCE),
        },
        tables={"flux": rows},
    )


@bounds_router.command("extend")
def extend(context: CommandContext) -> CommandResult:
    """Extension of the boundary data with one vortex at the origin and its energy bound."""
    context.require_domain("disk")
    trace = context.boundary_signal()
    _, degree = MapService.boundary_lift(trace)
    if context.options.extend_degree is not None:
        degree = context.options.extend_degree
    bounds = BoundsService(context.disk_grid((0j,) if degree else ()))
    report = bounds.extension_energy_bound(trace, degree)
    return CommandResult(results={
        **report.to_dict(),
        "degree": degree,
        "total_variation": MapService.total_variation(trace),
    })


def default_path(start: complex, target: complex, steps: int) -> List[complex]:
    """p_k = p_0 + (1 - 2^-k)(target - p_0), k = 1..steps."""
    return [start + (1.0 - 2.0 ** -k) * (target - start) for k in range(1, steps + 1)]


@bounds_router.command("sweep-stability")
def sweep_stability(context: CommandContext) -> CommandResult:
    """
    Move one vortex along a path with the boundary data fixed and compare with
    the limit configuration; the default path heads radially to the circle.
    """
    context.require_domain("disk")
    options = context.options
    vortices = context.config.vortex_config()
    if not len(vortices):
        raise ValidationException("config field 'vortices': the stability sweep needs at least one vortex")
    if options.moving_index >= len(vortices):
        raise ValidationException(
            f"config field 'options.moving_index': {options.moving_index} out of range for {len(vortices)} vortices"
        )

    trace = context.boundary_signal(context.disk_map() if context.config.boundary is None else None)
    start = vortices.entries[options.moving_index].position
    if options.path_target is not None:
        target = complex(*options.path_target)
    else:
        target = start / abs(start) if abs(start) > 0.0 else 1.0 + 0j
    path = [complex(x, y) for x, y in options.path] or default_path(start, target, options.path_steps)
    limit = complex(*options.limit) if options.limit is not None else target

    bounds = BoundsService(context.disk_grid())
    sweep = bounds.stability_sweep(trace, vortices, options.moving_index, path, limit, context.threads)
    return CommandResult(
        results={
            "limit": [limit.real, limit.imag],
            "limit_charge": sweep.limit_charge,
            "limit_energy": sweep.limit_energy,
            "final_energy": sweep.energies[-1],
            "final_gap": sweep.final_gap,
            "converged": sweep.converged,
        },
        tables={"sweep": sweep.rows()},
    )
