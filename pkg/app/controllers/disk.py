"""Disk commands: decomposition, energy, sphere lift and singularity detection."""

import logging
from typing import Dict, List

import numpy as np

from app.core.config import settings
from app.core.exceptions import NumericalContractException
from app.models.grid import PolarGrid
from app.models.vortex import VortexConfig
from app.schemas.report import CommandResult
from app.services.energy_service import EnergyService
from app.services.grid_service import GridService
from app.services.hodge_service import HodgeService
from app.services.map_service import MapService
from .router import CommandContext, CommandRouter

logger = logging.getLogger('vortexlab_disk_controller')

disk_router = CommandRouter(tags="Disk")


def vortex_rows(vortices: VortexConfig) -> List[Dict[str, float]]:
    return [{"x": v.position.real, "y": v.position.imag, "charge": v.charge} for v in vortices]


def field_rows(grid: PolarGrid, **fields: np.ndarray) -> List[Dict[str, float]]:
    """One row per grid node: x, y and the named fields."""
    points = grid.points.ravel()
    flat = {name: np.asarray(values).reshape(points.size, -1) for name, values in fields.items()}
    rows = []
    for index, point in enumerate(points):
        row = {"x": point.real, "y": point.imag}
        for name, values in flat.items():
            if values.shape[1] == 1:
                row[name] = values[index, 0]
            else:
                for component in range(values.shape[1]):
                    row[f"{name}{component + 1}"] = values[index, component]
        rows.append(row)
    return rows


@disk_router.command("decompose")
def decompose(context: CommandContext) -> CommandResult:
    """
    Hodge parts of the configured map with their residual checks.

    Raises:
        NumericalContractException: if the spectral reconstruction residual
            exceeds the reconstruction tolerance
    """
    context.require_domain("disk")
    options = context.options
    singular_map = context.disk_map()
    vortices = singular_map.vortices
    grid = context.disk_grid(vortices.positions)
    hodge = HodgeService(grid)

    parts = hodge.decompose(singular_map, options.scheme)
    residual = hodge.reconstruction_residual(singular_map, parts, options.exclusion)
    if residual > settings.RECONSTRUCTION_TOLERANCE:
        message = f"reconstruction residual {residual:.3e} exceeds {settings.RECONSTRUCTION_TOLERANCE:g}"
        if options.scheme == "spectral":
            raise NumericalContractException(message)
        logger.warning(f"[DiskController] {message} with the {options.scheme} scheme")

    results = {
        "scheme": options.scheme,
        "vortices": vortex_rows(vortices),
        "degree": vortices.total_charge(),
        "reconstruction_residual": residual,
        "a_mean": grid.integrate(parts.a_field.values) / grid.area,
        "b_boundary_max": float(np.max(np.abs(parts.b.value(np.exp(1j * grid.boundary_angles))))),
        "b_energy": EnergyService(grid, hodge).b_energy(parts),
        "dbar": hodge.dbar_residual(singular_map, parts, options.exclusion),
    }
    if not len(vortices.boundary):
        data = hodge.neumann_data(vortices, singular_map.trace)
        results["neumann_gap"] = hodge.remainder_neumann_gap(parts, data)
        results["compatibility_defect"] = data.defect
    tables = {"field": field_rows(grid, a=parts.a_field.values, b=parts.b_field.values)}
    return CommandResult(results=results, tables=tables)


def _plane_energy(context: CommandContext) -> CommandResult:
    plane = context.config.plane
    radial, angular = context.resolution
    energy = EnergyService.plane_energy(plane.zeros(), plane.poles(), plane.truncation_radius, radial, angular)
    charge = len(plane.p)
    quantized = 2.0 * np.pi * charge
    tail = EnergyService.plane_tail(plane.zeros(), plane.poles(), plane.truncation_radius)
    return CommandResult(results={
        "domain": "plane",
        "truncation_radius": plane.truncation_radius,
        "charge": charge,
        "energy": energy,
        "tail_estimate": tail,
        "quantized": quantized,
        "relative_gap": abs(energy - quantized) / max(1.0, quantized),
    })


@disk_router.command("energy")
def energy(context: CommandContext) -> CommandResult:
    """Renormalized energy with its identities; plane configs give the Blaschke energy."""
    context.require_domain("disk", "plane")
    if context.config.domain == "plane":
        return _plane_energy(context)

    options = context.options
    singular_map = context.disk_map()
    grid = context.disk_grid(singular_map.vortices.positions)
    hodge = HodgeService(grid)
    service = EnergyService(grid, hodge)
    parts = hodge.decompose(singular_map, options.scheme)

    breakdown = service.renormalized_energy(singular_map, parts)
    weighted_a, arctan = service.arctan_identity(singular_map, parts)
    b_energy = service.b_energy(parts)
    el = service.el_residual(singular_map, parts)
    results = {
        "domain": "disk",
        "breakdown": breakdown.to_dict(),
        "arctan_identity": {
            "weighted_a": weighted_a,
            "arctan": arctan,
            "relative_gap": abs(weighted_a - arctan) / max(1.0, abs(breakdown.total)),
        },
        "b_energy": b_energy,
        "el_residual": el,
        "critical": bool(el <= settings.EL_TOLERANCE),
    }
    if b_energy > settings.B_ENERGY_TOLERANCE:
        results["gauge"] = service.gauge_project(singular_map, parts).to_dict()
    logger.info(f"[DiskController] Energy {breakdown.total:.12g}")
    return CommandResult(results=results)


@disk_router.command("lift")
def lift(context: CommandContext) -> CommandResult:
    """Sphere-valued lift: degree, conformality and the lift table."""
    context.require_domain("disk", "plane")
    options = context.options
    radial, angular = context.resolution
    if context.config.domain == "plane":
        plane = context.config.plane
        centers = plane.zeros() + plane.poles()
        field = EnergyService.plane_lift(plane.zeros(), plane.poles(), plane.truncation_radius, radial, angular)
        b_energy = 0.0
    else:
        singular_map = context.disk_map()
        centers = list(singular_map.vortices.positions)
        grid = context.disk_grid(centers)
        service = EnergyService(grid)
        parts = service.hodge.decompose(singular_map, options.scheme)
        field = service.sphere_field(singular_map, parts)
        b_energy = service.b_energy(parts)

    degree = EnergyService.lift_degree(field)
    defect = EnergyService.conformality_defect(field, centers, options.exclusion)
    results = {
        "domain": context.config.domain,
        "degree_raw": degree.raw,
        "degree": degree.rounded,
        "ambiguous": degree.ambiguous,
        "conformality_defect": defect,
        "b_energy": b_energy,
        "unit_defect": field.unit_defect(),
    }
    if b_energy <= settings.B_ENERGY_TOLERANCE and defect > settings.CONFORMALITY_TOLERANCE:
        logger.warning(f"[DiskController] Lift of a b = 0 map has conformality defect {defect:.3e}")
    return CommandResult(results=results, tables={"lift": field_rows(field.grid, u=field.values)})


@disk_router.command("detect")
def detect(context: CommandContext) -> CommandResult:
    """
    Recover vortices from samples on a uniform polar lattice whose angles sit
    half a step off the axes.
    """
    context.require_domain("disk")
    radial, angular = context.resolution
    singular_map = context.disk_map()
    grid = GridService.build_uniform_grid(radial, angular, angle_offset=np.pi / angular)
    service = MapService(grid)
    service.check_resolution(singular_map)
    detected = service.detect_singularities(service.sample_map(singular_map))

    expected = singular_map.vortices.interior
    matches = sorted(detected.charges.tolist()) == sorted(expected.charges.tolist())
    if not matches:
        logger.warning(
            f"[DiskController] Detected charges {sorted(detected.charges.tolist())} differ from "
            f"configured {sorted(expected.charges.tolist())}"
        )
    return CommandResult(
        results={
            "detected": vortex_rows(detected),
            "total_charge": detected.total_charge(),
            "charges_match": matches,
        },
        tables={"vortices": vortex_rows(detected)},
    )
