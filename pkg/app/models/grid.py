"""Polar grids, sampled disk fields and boundary signals."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import ValidationException
from app.utils.quadrature import compensated_sum, weighted_sum
from app.utils.spectral import spectral_derivative


def _frozen(array: np.ndarray) -> np.ndarray:
    array = np.array(array, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class PolarGrid:
    """
    Tensor-product polar grid of a disk of radius `radius`.

    Node (i, j) sits at r = radial_nodes[i], theta = angle_offset + 2*pi*j/angular_count.
    `radial_weights` integrate g(r) r dr, so the area weights are
    radial_weights[i] * 2*pi / angular_count.
    """

    radial_nodes: np.ndarray
    radial_weights: np.ndarray
    angular_count: int
    angle_offset: float = 0.0
    radius: float = 1.0
    refinement_centers: Tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "radial_nodes", _frozen(np.asarray(self.radial_nodes, dtype=float)))
        object.__setattr__(self, "radial_weights", _frozen(np.asarray(self.radial_weights, dtype=float)))
        nodes = self.radial_nodes
        if self.angular_count % 2 != 0:
            raise ValidationException(f"angular count must be even, got {self.angular_count}")
        if nodes.ndim != 1 or nodes.shape != self.radial_weights.shape:
            raise ValidationException("radial nodes and weights must be matching 1-D arrays")
        if np.any(np.diff(nodes) <= 0.0) or nodes[0] <= 0.0:
            raise ValidationException("radial nodes must be positive and strictly increasing")
        if abs(nodes[-1] - self.radius) > 1e-14 * max(1.0, self.radius):
            raise ValidationException(f"last radial node {nodes[-1]!r} differs from radius {self.radius!r}")
        if np.any(self.radial_weights <= 0.0):
            raise ValidationException("quadrature weights must be positive")

    @property
    def radial_count(self) -> int:
        return int(self.radial_nodes.shape[0])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.radial_count, self.angular_count

    @cached_property
    def angles(self) -> np.ndarray:
        return _frozen(self.angle_offset + 2.0 * np.pi * np.arange(self.angular_count) / self.angular_count)

    @cached_property
    def points(self) -> np.ndarray:
        """Complex node positions, shape (Nr, Ntheta)."""
        return _frozen(self.radial_nodes[:, None] * np.exp(1j * self.angles)[None, :])

    @property
    def x(self) -> np.ndarray:
        return self.points.real

    @property
    def y(self) -> np.ndarray:
        return self.points.imag

    @cached_property
    def quadrature_weights(self) -> np.ndarray:
        weights = np.repeat(self.radial_weights[:, None] * (2.0 * np.pi / self.angular_count), self.angular_count, axis=1)
        return _frozen(weights)

    @cached_property
    def boundary_angles(self) -> np.ndarray:
        """Uniform boundary angles 2*pi*k/N used for boundary signals (no offset)."""
        return _frozen(2.0 * np.pi * np.arange(self.angular_count) / self.angular_count)

    @property
    def area(self) -> float:
        return float(np.pi * self.radius ** 2)

    def integrate(self, values: np.ndarray) -> float:
        """Compensated quadrature sum over all nodes."""
        return weighted_sum(self.quadrature_weights, values)

    def distance_to(self, centers) -> np.ndarray:
        """Distance from every node to the nearest of `centers` (inf when empty)."""
        if len(centers) == 0:
            return np.full(self.shape, np.inf)
        points = self.points
        return np.min(np.stack([np.abs(points - c) for c in centers]), axis=0)


@dataclass(frozen=True, eq=False)
class DiskField:
    """Scalar or covector samples on a PolarGrid."""

    grid: PolarGrid
    values: np.ndarray
    kind: str = "scalar"

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = self.grid.shape if self.kind == "scalar" else self.grid.shape + (2,)
        if self.kind not in ("scalar", "covector"):
            raise ValidationException(f"unknown field kind {self.kind!r}")
        if values.shape != expected:
            raise ValidationException(f"{self.kind} field has shape {values.shape}, expected {expected}")
        if not np.all(np.isfinite(values)):
            raise ValidationException("field values must be finite at every node")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def covector(cls, grid: PolarGrid, first: np.ndarray, second: np.ndarray) -> "DiskField":
        return cls(grid, np.stack([first, second], axis=-1), kind="covector")

    def magnitude(self) -> "DiskField":
        if self.kind == "scalar":
            return DiskField(self.grid, np.abs(self.values))
        return DiskField(self.grid, np.hypot(self.values[..., 0], self.values[..., 1]))


@dataclass(frozen=True, eq=False)
class BoundarySignal:
    """
    Samples on the unit circle at theta_k = 2*pi*k/N.

    kind is "real" for phases and Neumann data, "unit" for circle-valued traces.
    Fourier modes follow numpy ordering and are normalized by N.
    """

    samples: np.ndarray
    kind: str = "real"
    modes: Optional[np.ndarray] = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind == "real":
            samples = np.asarray(self.samples, dtype=float)
        elif self.kind == "unit":
            samples = np.asarray(self.samples, dtype=complex)
            if np.max(np.abs(np.abs(samples) - 1.0), initial=0.0) > settings.UNIT_MODULUS_TOLERANCE:
                raise ValidationException("unit boundary signal has samples off the unit circle")
        else:
            raise ValidationException(f"unknown boundary signal kind {self.kind!r}")
        if samples.ndim != 1 or samples.shape[0] < 2:
            raise ValidationException("boundary signal needs a 1-D sample array of length >= 2")
        object.__setattr__(self, "samples", _frozen(samples))
        if self.modes is not None:
            object.__setattr__(self, "modes", _frozen(np.asarray(self.modes, dtype=complex)))

    @classmethod
    def from_function(cls, function, count: int, kind: str = "real") -> "BoundarySignal":
        angles = 2.0 * np.pi * np.arange(count) / count
        return cls(function(angles), kind=kind)

    @property
    def count(self) -> int:
        return int(self.samples.shape[0])

    @cached_property
    def angles(self) -> np.ndarray:
        return _frozen(2.0 * np.pi * np.arange(self.count) / self.count)

    @cached_property
    def fourier_modes(self) -> np.ndarray:
        if self.modes is not None:
            return self.modes
        return _frozen(np.fft.fft(self.samples) / self.count)

    def mode(self, k: int) -> complex:
        return complex(self.fourier_modes[k % self.count])

    def inverse(self) -> np.ndarray:
        """Samples reconstructed from the Fourier modes."""
        values = np.fft.ifft(self.fourier_modes * self.count)
        return values.real if self.kind == "real" else values

    def derivative(self) -> "BoundarySignal":
        if self.kind != "real":
            raise ValidationException("spectral derivative is defined for real signals")
        return BoundarySignal(spectral_derivative(self.samples))

    def mean(self) -> float:
        return float(np.real(self.fourier_modes[0]))

    def integral(self) -> float:
        """Trapezoidal integral over the circle, exact for band-limited signals."""
        return compensated_sum((self.samples * (2.0 * np.pi / self.count)).tolist())
