"""Immutable numerical domain types."""

from .bounds import BoundReport, FluxReport, StabilitySweep
from .energy import DegreeReport, EnergyBreakdown, GaugeReport, SphereField, VariationCheck
from .grid import BoundarySignal, DiskField, PolarGrid
from .hodge import HarmonicField, HodgeParts, NeumannData, PotentialA
from .minimize import MinimizeProblem, MinimizeResult, TraceEntry
from .selftest import InvariantCheck
from .torus import TorusDecomposition, TorusMap, TrigTerm
from .vortex import PhaseTerm, SingularMap, SmoothPhase, Vortex, VortexConfig

__all__ = [
    "BoundReport", "FluxReport", "StabilitySweep",
    "DegreeReport", "EnergyBreakdown", "GaugeReport", "SphereField", "VariationCheck",
    "BoundarySignal", "DiskField", "PolarGrid",
    "HarmonicField", "HodgeParts", "NeumannData", "PotentialA",
    "MinimizeProblem", "MinimizeResult", "TraceEntry",
    "InvariantCheck",
    "TorusDecomposition", "TorusMap", "TrigTerm",
    "PhaseTerm", "SingularMap", "SmoothPhase", "Vortex", "VortexConfig",
]
