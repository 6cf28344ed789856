"""Maps on the flat unit torus and their periodic decompositions."""

from dataclasses import dataclass
from functools import cached_property
from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ValidationException


@dataclass(frozen=True)
class TrigTerm:
    """c * cos(2 pi (kx x + ky y)) or c * sin(...)."""

    coefficient: float
    kx: int
    ky: int
    kind: str = "cos"


@dataclass(frozen=True, eq=False)
class TorusMap:
    """
    Vortices of total charge zero, a trigonometric phase and a winding pair (m, n):
    omega = grad-perp a + grad psi + 2 pi (m, n).
    """

    positions: Tuple[complex, ...] = ()
    charges: Tuple[int, ...] = ()
    terms: Tuple[TrigTerm, ...] = ()
    winding: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        if len(self.positions) != len(self.charges):
            raise ValidationException("torus vortices need one charge per position")
        for charge in self.charges:
            if int(charge) != charge or charge == 0:
                raise ValidationException(f"vortex charge must be a nonzero integer, got {charge!r}")
        if sum(self.charges) != 0:
            raise ValidationException(
                f"torus vortex charges sum to {sum(self.charges)}; a periodic potential needs total charge 0"
            )
        for term in self.terms:
            if term.kind not in ("cos", "sin"):
                raise ValidationException(f"trigonometric term kind must be 'cos' or 'sin', got {term.kind!r}")
            if max(abs(term.kx), abs(term.ky)) > settings.TORUS_MAX_WAVENUMBER:
                raise ValidationException(
                    f"trigonometric wavenumber ({term.kx}, {term.ky}) exceeds {settings.TORUS_MAX_WAVENUMBER}"
                )
        wrapped = tuple(complex(p.real % 1.0, p.imag % 1.0) for p in map(complex, self.positions))
        for i, first in enumerate(wrapped):
            for second in wrapped[i + 1:]:
                if abs(first - second) <= settings.VORTEX_TOLERANCE:
                    raise ValidationException(f"coincident torus vortices at ({first.real:.6g}, {first.imag:.6g})")
        object.__setattr__(self, "positions", wrapped)
        object.__setattr__(self, "charges", tuple(int(d) for d in self.charges))
        object.__setattr__(self, "terms", tuple(self.terms))
        object.__setattr__(self, "winding", (int(self.winding[0]), int(self.winding[1])))

    @property
    def harmonic_form(self) -> Tuple[float, float]:
        return 2.0 * np.pi * self.winding[0], 2.0 * np.pi * self.winding[1]

    @property
    def dipole_moment(self) -> complex:
        return complex(sum(d * p for d, p in zip(self.charges, self.positions)))

    def phase_value(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        total = np.zeros(np.broadcast(x, y).shape)
        for term in self.terms:
            argument = 2.0 * np.pi * (term.kx * x + term.ky * y)
            total = total + term.coefficient * (np.cos(argument) if term.kind == "cos" else np.sin(argument))
        return total

    def phase_gradient(self, x: np.ndarray, y: np.ndarray) -> np.ndarray:
        gradient = np.zeros(np.broadcast(x, y).shape, dtype=complex)
        for term in self.terms:
            argument = 2.0 * np.pi * (term.kx * x + term.ky * y)
            derivative = -np.sin(argument) if term.kind == "cos" else np.cos(argument)
            gradient = gradient + term.coefficient * derivative * 2.0 * np.pi * complex(term.kx, term.ky)
        return gradient

    def phase_mean(self) -> float:
        return float(sum(t.coefficient for t in self.terms if t.kind == "cos" and t.kx == 0 and t.ky == 0))


@dataclass(frozen=True, eq=False)
class TorusDecomposition:
    """Samples of a, grad a, b, grad b on an M x M periodic grid, plus h and the Fourier data of a."""

    truncation: int
    size: int
    a_modes: np.ndarray
    a: np.ndarray
    a_gradient: np.ndarray
    b: np.ndarray
    b_gradient: np.ndarray
    h: Tuple[float, float]

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, np.ndarray]:
        ticks = np.arange(self.size) / self.size
        return np.meshgrid(ticks, ticks, indexing="ij")

    @property
    def cell_area(self) -> float:
        return 1.0 / (self.size * self.size)
