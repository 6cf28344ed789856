"""Shared builders for the test modules."""

import numpy as np

from app.models.vortex import SmoothPhase, VortexConfig
from app.schemas.problem import BoundarySpec
from app.services.map_service import MapService

# Single vortex at the origin
SINGLE_VORTEX_ENERGY = 2.0 * np.pi * np.e / (np.e + 1.0)


def make_map(triples=(), coefficients=None, boundary_count=256):
    """Singular map from (x, y, charge) triples and {(m, n): c} phase coefficients."""
    vortices = VortexConfig.from_triples(triples)
    phase = SmoothPhase.from_coefficients(coefficients or {})
    return MapService.make_singular_map(vortices, phase, boundary_count)


def boundary(name, samples=256):
    return BoundarySpec(preset=name, samples=samples).to_signal()
