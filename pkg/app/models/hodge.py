"""Evaluators for the pieces of the Hodge decomposition -i g^{-1} grad g = grad-perp a + grad b."""

from dataclasses import dataclass, field
from typing import Optional, Tuple

import numpy as np

from app.models.grid import BoundarySignal, DiskField, PolarGrid
from app.models.vortex import SmoothPhase, VortexConfig
from app.utils.potentials import log_potential, image_log_potential
from app.utils.spectral import HolomorphicPolynomial


@dataclass(frozen=True, eq=False)
class HarmonicField:
    """Re F + constant (part='real') or Im F + constant (part='imag') for a holomorphic polynomial F."""

    polynomial: HolomorphicPolynomial
    part: str = "real"
    constant: float = 0.0

    def value(self, z) -> np.ndarray:
        values = self.polynomial(z)
        values = np.real(values) if self.part == "real" else np.imag(values)
        return values + self.constant

    def gradient(self, z) -> np.ndarray:
        """Complex gradient; grad Re F = conj(F'), grad Im F = i conj(F')."""
        derivative = np.conj(self.polynomial.derivative(z))
        return derivative if self.part == "real" else 1j * derivative

    def scaled(self, factor: float) -> "HarmonicField":
        return HarmonicField(
            HolomorphicPolynomial(factor * self.polynomial.coefficients), self.part, factor * self.constant
        )

    def shifted(self, constant: float) -> "HarmonicField":
        return HarmonicField(self.polynomial, self.part, self.constant + constant)

    def sample(self, grid: PolarGrid) -> DiskField:
        return DiskField(grid, self.value(grid.points))


@dataclass(frozen=True, eq=False)
class PotentialA:
    """
    a = Phi + images + harmonic, Phi = sum d_i log|z - p_i|.

    `image_positions` and `image_charges` are mirror charges outside the open
    disk; they are harmonic inside and used by the mirror assembly.
    """

    vortices: VortexConfig
    harmonic: HarmonicField
    image_positions: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=complex))
    image_charges: np.ndarray = field(default_factory=lambda: np.zeros(0))
    quadratic: float = 0.0

    def singular(self, z) -> Tuple[np.ndarray, np.ndarray]:
        return log_potential(self.vortices.positions, self.vortices.charges, z)

    def remainder(self, z) -> Tuple[np.ndarray, np.ndarray]:
        """The smooth part a - Phi with its gradient."""
        z = np.asarray(z, dtype=complex)
        values = self.harmonic.value(z) + self.quadratic * np.abs(z) ** 2
        gradients = self.harmonic.gradient(z) + 2.0 * self.quadratic * z
        if len(self.image_positions):
            image_values, image_gradients = image_log_potential(self.image_positions, self.image_charges, z)
            values = values + image_values
            gradients = gradients + image_gradients
        return values, gradients

    def value(self, z) -> np.ndarray:
        singular, _ = self.singular(z)
        remainder, _ = self.remainder(z)
        return singular + remainder

    def gradient(self, z) -> np.ndarray:
        _, singular = self.singular(z)
        _, remainder = self.remainder(z)
        return singular + remainder

    def evaluate(self, z) -> Tuple[np.ndarray, np.ndarray]:
        singular_values, singular_gradients = self.singular(z)
        values, gradients = self.remainder(z)
        return singular_values + values, singular_gradients + gradients

    def shifted(self, constant: float) -> "PotentialA":
        return PotentialA(
            self.vortices, self.harmonic.shifted(constant), self.image_positions, self.image_charges, self.quadratic
        )


@dataclass(frozen=True, eq=False)
class PoissonField:
    """b = psi_poly - (harmonic extension of the trace of psi_poly); zero on the circle."""

    phase: SmoothPhase
    correction: HarmonicField

    def value(self, z) -> np.ndarray:
        return self.phase.polynomial_value(z) - self.correction.value(z)

    def gradient(self, z) -> np.ndarray:
        return self.phase.polynomial_gradient(z) - self.correction.gradient(z)


@dataclass(frozen=True, eq=False)
class RadialModeField:
    """
    b(r, theta) = sum_k b_k(r) e^{ik theta} from radial mode profiles on a uniform radial mesh.

    Profiles are interpolated linearly in r; the gradient uses centred
    differences of the profiles and exact angular derivatives.
    """

    radii: np.ndarray
    profiles: np.ndarray
    wavenumbers: np.ndarray

    def _profile_values(self, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        slopes = np.gradient(self.profiles, self.radii, axis=0)
        flat = r.ravel()
        values = np.stack([
            np.interp(flat, self.radii, self.profiles[:, j].real)
            + 1j * np.interp(flat, self.radii, self.profiles[:, j].imag)
            for j in range(self.profiles.shape[1])
        ], axis=-1)
        derivatives = np.stack([
            np.interp(flat, self.radii, slopes[:, j].real)
            + 1j * np.interp(flat, self.radii, slopes[:, j].imag)
            for j in range(self.profiles.shape[1])
        ], axis=-1)
        return values.reshape(r.shape + (-1,)), derivatives.reshape(r.shape + (-1,))

    def value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r, theta = np.abs(z), np.angle(z)
        values, _ = self._profile_values(r)
        return np.real(np.sum(values * np.exp(1j * self.wavenumbers * theta[..., None]), axis=-1))

    def gradient(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        r, theta = np.abs(z), np.angle(z)
        values, derivatives = self._profile_values(r)
        phases = np.exp(1j * self.wavenumbers * theta[..., None])
        radial = np.real(np.sum(derivatives * phases, axis=-1))
        safe_r = np.where(r > 0.0, r, 1.0)
        angular = np.real(np.sum(1j * self.wavenumbers * values * phases, axis=-1)) / safe_r
        angular = np.where(r > 0.0, angular, 0.0)
        direction = np.where(r > 0.0, z / safe_r, 1.0)
        return direction * (radial + 1j * angular)


@dataclass(frozen=True, eq=False)
class NeumannData:
    """Neumann data beta of the harmonic remainder of a, with the compatibility defect."""

    beta: BoundarySignal
    defect: float = 0.0


@dataclass(frozen=True, eq=False)
class HodgeParts:
    """Potentials a (zero average) and b (zero trace), sampled on `grid`, plus the harmonic form h."""

    grid: PolarGrid
    a: PotentialA
    b: object
    a_field: DiskField
    b_field: DiskField
    boundary_harmonic: Optional[HarmonicField] = None
    h: Tuple[float, float] = (0.0, 0.0)

    @property
    def a_singular(self):
        return self.a.singular

    @property
    def a_harmonic(self) -> HarmonicField:
        return self.a.harmonic
