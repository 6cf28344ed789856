"""Torus command."""

import logging

import numpy as np

from app.schemas.report import CommandResult
from app.services.torus_service import TorusService
from .router import CommandContext, CommandRouter

logger = logging.getLogger('vortexlab_torus_controller')

torus_router = CommandRouter(tags="Torus")


@torus_router.command("torus-energy")
def torus_energy(context: CommandContext) -> CommandResult:
    context.require_domain("torus")
    spec = context.config.torus
    torus_map = spec.to_model()
    service = TorusService(spec.truncation, spec.factor)
    breakdown = service.torus_energy(torus_map)
    h = torus_map.harmonic_form
    results = {
        "breakdown": breakdown.to_dict(),
        "h": list(h),
        "h_over_2pi": [h[0] / (2.0 * np.pi), h[1] / (2.0 * np.pi)],
        "dipole_moment": torus_map.dipole_moment,
        "truncation": spec.truncation,
        "grid_size": service.size,
    }
    if context.options.convergence:
        coarse, fine, change = service.torus_convergence(torus_map)
        results["convergence"] = {"coarse": coarse, "fine": fine, "relative_change": change}
    return CommandResult(results=results)
