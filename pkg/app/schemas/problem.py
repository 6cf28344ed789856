"""Problem configuration schemas for VortexLab."""

import json
from typing import List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from app.config.presets import BOUNDARY_PRESETS, MAP_PRESETS, PLANE_PRESETS, TORUS_PRESETS
from app.core.config import settings
from app.core.exceptions import ValidationException
from app.models.grid import BoundarySignal
from app.models.torus import TorusMap, TrigTerm
from app.models.vortex import PhaseTerm, SmoothPhase, Vortex, VortexConfig


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class VortexSpec(StrictModel):
    """Vortex in the closed unit disk."""
    x: float
    y: float
    charge: int

    @field_validator("charge")
    @classmethod
    def validate_charge(cls, value: int) -> int:
        if value == 0:
            raise ValueError("vortex charge must be a nonzero integer")
        return value

    @model_validator(mode='after')
    def validate_boundary_charge(self):
        radius = float(np.hypot(self.x, self.y))
        if radius > 1.0 + settings.BOUNDARY_TOLERANCE:
            raise ValueError(f"vortex at ({self.x}, {self.y}) lies outside the closed unit disk")
        if abs(radius - 1.0) <= settings.BOUNDARY_TOLERANCE and self.charge % 2 != 0:
            raise ValueError(
                f"boundary vortex at ({self.x}, {self.y}) has odd charge {self.charge}; "
                "charges on the boundary circle must be even"
            )
        return self


class PhaseTermSpec(StrictModel):
    """coefficient * x^x_power * y^y_power"""
    coefficient: float
    x_power: int = Field(ge=0)
    y_power: int = Field(ge=0)


class FourierModeSpec(StrictModel):
    """cos * cos(k theta) + sin * sin(k theta) added to the boundary lift."""
    k: int = Field(ge=1)
    cos: float = 0.0
    sin: float = 0.0


class BoundarySpec(StrictModel):
    """g0 = exp(i (degree * theta + sum of modes)) sampled at `samples` angles."""
    preset: Optional[str] = None
    degree: int = 0
    modes: List[FourierModeSpec] = []
    samples: int = settings.DEFAULT_ANGULAR_NODES

    @field_validator("samples")
    @classmethod
    def validate_samples(cls, value: int) -> int:
        if value % 2 != 0 or value < settings.MIN_ANGULAR_NODES:
            raise ValueError(f"boundary sample count must be even and at least {settings.MIN_ANGULAR_NODES}")
        return value

    @model_validator(mode='after')
    def apply_preset(self):
        if self.preset is not None:
            if self.preset not in BOUNDARY_PRESETS:
                raise ValueError(f"unknown boundary preset {self.preset!r}")
            preset = BOUNDARY_PRESETS[self.preset]
            self.degree = preset["degree"]
            self.modes = [FourierModeSpec(**mode) for mode in preset["modes"]]
        return self

    def to_signal(self) -> BoundarySignal:
        angles = 2.0 * np.pi * np.arange(self.samples) / self.samples
        lift = self.degree * angles
        for mode in self.modes:
            lift = lift + mode.cos * np.cos(mode.k * angles) + mode.sin * np.sin(mode.k * angles)
        return BoundarySignal(np.exp(1j * lift), kind="unit")


class GridSpec(StrictModel):
    radial: int = settings.DEFAULT_RADIAL_NODES
    angular: int = settings.DEFAULT_ANGULAR_NODES

    @model_validator(mode='after')
    def validate_counts(self):
        if self.radial < settings.MIN_RADIAL_NODES:
            raise ValueError(f"radial node count must be at least {settings.MIN_RADIAL_NODES}")
        if self.angular % 2 != 0 or self.angular < settings.MIN_ANGULAR_NODES:
            raise ValueError(f"angular count must be even and at least {settings.MIN_ANGULAR_NODES}")
        return self


class PlaneSpec(StrictModel):
    """+1 charges at p, -1 charges at q, integrated over |z| < truncation_radius."""
    p: List[Tuple[float, float]] = []
    q: List[Tuple[float, float]] = []
    truncation_radius: float = Field(default=settings.PLANE_TRUNCATION_RADIUS, gt=0.0)

    @model_validator(mode='after')
    def validate_pairs(self):
        if len(self.p) != len(self.q):
            raise ValueError("plane maps need equally many +1 and -1 charges")
        return self

    def zeros(self) -> List[complex]:
        return [complex(x, y) for x, y in self.p]

    def poles(self) -> List[complex]:
        return [complex(x, y) for x, y in self.q]


class TorusVortexSpec(StrictModel):
    x: float
    y: float
    charge: int

    @field_validator("charge")
    @classmethod
    def validate_charge(cls, value: int) -> int:
        if value == 0:
            raise ValueError("vortex charge must be a nonzero integer")
        return value


class TrigTermSpec(StrictModel):
    coefficient: float
    kx: int
    ky: int
    kind: Literal["cos", "sin"] = "cos"


class TorusSpec(StrictModel):
    winding: Tuple[int, int] = (0, 0)
    vortices: List[TorusVortexSpec] = []
    terms: List[TrigTermSpec] = []
    truncation: int = Field(default=settings.TORUS_TRUNCATION, ge=1)
    factor: int = Field(default=settings.TORUS_QUADRATURE_FACTOR, ge=1)

    @model_validator(mode='after')
    def validate_total_charge(self):
        total = sum(v.charge for v in self.vortices)
        if total != 0:
            raise ValueError(f"torus vortex charges sum to {total}; a periodic potential needs total charge 0")
        return self

    def to_model(self) -> TorusMap:
        return TorusMap(
            positions=tuple(complex(v.x, v.y) for v in self.vortices),
            charges=tuple(v.charge for v in self.vortices),
            terms=tuple(TrigTerm(t.coefficient, t.kx, t.ky, t.kind) for t in self.terms),
            winding=self.winding,
        )


class OptionsSpec(StrictModel):
    """Command-specific options; every command reads only the ones it needs."""
    scheme: Literal["spectral", "finite_difference"] = "spectral"
    exclusion: float = Field(default=settings.EXCLUSION_RADIUS, gt=0.0)
    levels: List[float] = []
    level_count: int = Field(default=10, ge=1)
    family_count: int = Field(default=0, ge=0)
    extend_degree: Optional[int] = None
    charges: List[int] = []
    margin: float = Field(default=settings.DEFAULT_MARGIN, ge=0.0, lt=0.5)
    max_evaluations: int = Field(default=settings.MAX_EVALUATIONS, ge=1)
    restarts: int = Field(default=settings.RESTARTS, ge=1)
    step: float = Field(default=settings.SIMPLEX_STEP, gt=0.0)
    tolerance: float = Field(default=settings.SIMPLEX_TOLERANCE, gt=0.0)
    formulation: Literal["mirror", "conjugate"] = "mirror"
    partitions: int = Field(default=0, ge=0)
    moving_index: int = Field(default=0, ge=0)
    path: List[Tuple[float, float]] = []
    path_target: Optional[Tuple[float, float]] = None
    path_steps: int = Field(default=settings.STABILITY_STEPS, ge=1)
    limit: Optional[Tuple[float, float]] = None
    convergence: bool = False

    @field_validator("charges")
    @classmethod
    def validate_charges(cls, value: List[int]) -> List[int]:
        if any(d == 0 for d in value):
            raise ValueError("vortex charge must be a nonzero integer")
        return value


class ProblemConfig(StrictModel):
    """A complete problem: domain, map data, boundary data, grid, options and seed."""
    domain: Optional[Literal["disk", "plane", "torus"]] = None
    preset: Optional[str] = None
    vortices: List[VortexSpec] = []
    phase: List[PhaseTermSpec] = []
    boundary: Optional[BoundarySpec] = None
    grid: GridSpec = Field(default_factory=GridSpec)
    plane: Optional[PlaneSpec] = None
    torus: Optional[TorusSpec] = None
    options: OptionsSpec = Field(default_factory=OptionsSpec)
    seed: int = settings.DEFAULT_SEED

    @model_validator(mode='after')
    def apply_preset(self):
        if self.preset is not None:
            if self.domain is None:
                if self.preset in MAP_PRESETS:
                    self.domain = "disk"
                elif self.preset in PLANE_PRESETS:
                    self.domain = "plane"
                elif self.preset in TORUS_PRESETS:
                    self.domain = "torus"
            presets = {"disk": MAP_PRESETS, "plane": PLANE_PRESETS, "torus": TORUS_PRESETS}.get(self.domain or "disk")
            if self.preset not in presets:
                raise ValueError(f"unknown {self.domain or 'disk'} preset {self.preset!r}")
            preset = presets[self.preset]
            if self.domain in (None, "disk") and not self.vortices and not self.phase:
                self.vortices = [VortexSpec(**v) for v in preset["vortices"]]
                self.phase = [PhaseTermSpec(**t) for t in preset["phase"]]
            elif self.domain == "plane" and self.plane is None:
                self.plane = PlaneSpec(**preset)
            elif self.domain == "torus" and self.torus is None:
                self.torus = TorusSpec(**preset)
        if self.domain is None:
            self.domain = "disk"

        positions = [complex(v.x, v.y) for v in self.vortices]
        for i, first in enumerate(positions):
            for second in positions[i + 1:]:
                if abs(first - second) <= settings.VORTEX_TOLERANCE:
                    raise ValueError(f"coincident vortices at ({first.real}, {first.imag})")
        return self

    def vortex_config(self) -> VortexConfig:
        return VortexConfig(tuple(Vortex(complex(v.x, v.y), v.charge) for v in self.vortices))

    def smooth_phase(self) -> SmoothPhase:
        return SmoothPhase(tuple(PhaseTerm(t.coefficient, t.x_power, t.y_power) for t in self.phase))

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))


def _field_path(location) -> str:
    return ".".join(str(part) for part in location) or "<root>"


def parse_config(text: str, preset: Optional[str] = None) -> ProblemConfig:
    """
    Parse and validate a JSON problem configuration; `preset` replaces the
    config's own preset name.

    Raises:
        ValidationException: naming the line and column of a JSON syntax error,
            or the dotted path of the first invalid field
    """
    try:
        data = json.loads(text) if text.strip() else {}
    except json.JSONDecodeError as e:
        raise ValidationException(f"config is not valid JSON (line {e.lineno}, column {e.colno}): {e.msg}")
    if not isinstance(data, dict):
        raise ValidationException("config must be a JSON object")
    if preset is not None:
        data["preset"] = preset
    try:
        return ProblemConfig.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise ValidationException(f"config field '{_field_path(first['loc'])}': {first['msg']}")
