"""Vortex configurations, polynomial phases and singular circle-valued maps."""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Iterable, Iterator, Optional, Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainException, ValidationException
from app.models.grid import BoundarySignal
from app.utils.potentials import check_away_from, log_potential, perpendicular
from app.utils.spectral import HolomorphicPolynomial


@dataclass(frozen=True)
class Vortex:
    """A point singularity p with integer charge d."""

    position: complex
    charge: int

    @property
    def is_boundary(self) -> bool:
        return abs(abs(self.position) - 1.0) <= settings.BOUNDARY_TOLERANCE


@dataclass(frozen=True, eq=False)
class VortexConfig:
    """
    Finite set of charged points in the closed unit disk.

    Boundary points must carry even charge; they count half towards the total.
    """

    entries: Tuple[Vortex, ...] = ()

    def __post_init__(self):
        normalized = []
        for vortex in self.entries:
            charge = vortex.charge
            if isinstance(charge, bool) or int(charge) != charge or charge == 0:
                raise ValidationException(f"vortex charge must be a nonzero integer, got {charge!r}")
            position = complex(vortex.position)
            radius = abs(position)
            if radius > 1.0 + settings.BOUNDARY_TOLERANCE:
                raise ValidationException(
                    f"vortex at ({position.real:.6g}, {position.imag:.6g}) lies outside the closed unit disk"
                )
            if abs(radius - 1.0) <= settings.BOUNDARY_TOLERANCE:
                if int(charge) % 2 != 0:
                    raise ValidationException(
                        f"boundary vortex at ({position.real:.6g}, {position.imag:.6g}) has odd charge {charge}; "
                        "charges on the boundary circle must be even"
                    )
                position = position / radius
            normalized.append(Vortex(position, int(charge)))

        for i, first in enumerate(normalized):
            for second in normalized[i + 1:]:
                if abs(first.position - second.position) <= settings.VORTEX_TOLERANCE:
                    raise ValidationException(
                        f"coincident vortices at ({first.position.real:.6g}, {first.position.imag:.6g})"
                    )
        object.__setattr__(self, "entries", tuple(normalized))

    @classmethod
    def from_triples(cls, triples: Iterable[Tuple[float, float, int]]) -> "VortexConfig":
        return cls(tuple(Vortex(complex(x, y), int(d)) for x, y, d in triples))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Vortex]:
        return iter(self.entries)

    @cached_property
    def positions(self) -> np.ndarray:
        return np.array([v.position for v in self.entries], dtype=complex)

    @cached_property
    def charges(self) -> np.ndarray:
        return np.array([v.charge for v in self.entries], dtype=int)

    @cached_property
    def boundary_mask(self) -> np.ndarray:
        return np.array([v.is_boundary for v in self.entries], dtype=bool)

    @property
    def interior(self) -> "VortexConfig":
        return VortexConfig(tuple(v for v in self.entries if not v.is_boundary))

    @property
    def boundary(self) -> "VortexConfig":
        return VortexConfig(tuple(v for v in self.entries if v.is_boundary))

    @cached_property
    def effective_charges(self) -> np.ndarray:
        """Interior charges as given, boundary charges halved."""
        return np.where(self.boundary_mask, self.charges / 2.0, self.charges.astype(float))

    def total_charge(self) -> int:
        interior = int(np.sum(self.charges[~self.boundary_mask])) if len(self) else 0
        boundary = int(np.sum(self.charges[self.boundary_mask])) if len(self) else 0
        return interior + boundary // 2

    def charge_sum(self, boundary: bool, positive_only: bool = False, absolute: bool = False) -> int:
        """Sum of interior (boundary=False) or boundary charges, optionally d > 0 only or |d|."""
        selected = [v.charge for v in self.entries if v.is_boundary == boundary]
        if positive_only:
            selected = [d for d in selected if d > 0]
        if absolute:
            selected = [abs(d) for d in selected]
        return int(sum(selected))

    def moved(self, index: int, position: complex) -> "VortexConfig":
        entries = list(self.entries)
        entries[index] = Vortex(complex(position), entries[index].charge)
        return VortexConfig(tuple(entries))


@dataclass(frozen=True)
class PhaseTerm:
    """c * x**m * y**n"""

    coefficient: float
    x_power: int
    y_power: int

    @property
    def degree(self) -> int:
        return self.x_power + self.y_power


def _monomials(coefficients: Dict[Tuple[int, int], float], x: np.ndarray, y: np.ndarray) -> np.ndarray:
    total = np.zeros(np.broadcast(x, y).shape)
    for (m, n), c in coefficients.items():
        total = total + c * x ** m * y ** n
    return total


@dataclass(frozen=True, eq=False)
class SmoothPhase:
    """
    psi = sum c_mn x^m y^n + (harmonic extension of boundary_phase).

    The boundary part is carried as a holomorphic polynomial F with Re F equal
    to boundary_phase on the circle, so psi, grad psi and the Laplacian are
    available in closed form.
    """

    terms: Tuple[PhaseTerm, ...] = ()
    boundary_phase: Optional[BoundarySignal] = None
    degree_cap: int = settings.MAX_PHASE_DEGREE

    def __post_init__(self):
        terms = tuple(self.terms)
        for term in terms:
            if term.x_power < 0 or term.y_power < 0:
                raise ValidationException(f"phase exponents must be nonnegative, got {term}")
            if term.degree > self.degree_cap:
                raise ValidationException(
                    f"phase term x^{term.x_power} y^{term.y_power} exceeds the degree cap {self.degree_cap}"
                )
        if self.boundary_phase is not None and self.boundary_phase.kind != "real":
            raise ValidationException("boundary phase must be a real boundary signal")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_coefficients(cls, coefficients: Dict[Tuple[int, int], float], **kwargs) -> "SmoothPhase":
        return cls(tuple(PhaseTerm(float(c), int(m), int(n)) for (m, n), c in coefficients.items()), **kwargs)

    @cached_property
    def coefficients(self) -> Dict[Tuple[int, int], float]:
        merged: Dict[Tuple[int, int], float] = {}
        for term in self.terms:
            key = (term.x_power, term.y_power)
            merged[key] = merged.get(key, 0.0) + float(term.coefficient)
        return {key: c for key, c in sorted(merged.items()) if c != 0.0}

    @property
    def degree(self) -> int:
        return max((m + n for m, n in self.coefficients), default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients and self.boundary_phase is None

    @cached_property
    def extension(self) -> Optional[HolomorphicPolynomial]:
        if self.boundary_phase is None:
            return None
        return HolomorphicPolynomial.from_modes(self.boundary_phase.fourier_modes)

    @cached_property
    def laplacian_coefficients(self) -> Dict[Tuple[int, int], float]:
        result: Dict[Tuple[int, int], float] = {}
        for (m, n), c in self.coefficients.items():
            if m >= 2:
                key = (m - 2, n)
                result[key] = result.get(key, 0.0) + c * m * (m - 1)
            if n >= 2:
                key = (m, n - 2)
                result[key] = result.get(key, 0.0) + c * n * (n - 1)
        return {key: c for key, c in sorted(result.items()) if abs(c) > 0.0}

    @property
    def is_harmonic(self) -> bool:
        return not self.laplacian_coefficients

    @property
    def polynomial_part(self) -> "SmoothPhase":
        return SmoothPhase(self.terms, None, self.degree_cap)

    def polynomial_value(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return _monomials(self.coefficients, z.real, z.imag)

    def polynomial_gradient(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        x, y = z.real, z.imag
        gx = np.zeros(z.shape)
        gy = np.zeros(z.shape)
        for (m, n), c in self.coefficients.items():
            if m > 0:
                gx = gx + c * m * x ** (m - 1) * y ** n
            if n > 0:
                gy = gy + c * n * x ** m * y ** (n - 1)
        return gx + 1j * gy

    def value(self, z) -> np.ndarray:
        values = self.polynomial_value(z)
        if self.extension is not None:
            values = values + np.real(self.extension(z))
        return values

    def gradient(self, z) -> np.ndarray:
        """Complex gradient psi_x + i psi_y."""
        gradient = self.polynomial_gradient(z)
        if self.extension is not None:
            gradient = gradient + np.conj(self.extension.derivative(z))
        return gradient

    def laplacian(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        return _monomials(self.laplacian_coefficients, z.real, z.imag)

    def trace(self, angles) -> np.ndarray:
        return self.value(np.exp(1j * np.asarray(angles, dtype=float)))

    def plus(self, other: "SmoothPhase", scale: float = 1.0) -> "SmoothPhase":
        """Polynomial sum self + scale * other; other must not carry a boundary phase."""
        if other.boundary_phase is not None:
            raise ValidationException("only polynomial phases can be added")
        scaled = tuple(PhaseTerm(scale * t.coefficient, t.x_power, t.y_power) for t in other.terms)
        return SmoothPhase(self.terms + scaled, self.boundary_phase, self.degree_cap)


@dataclass(frozen=True, eq=False)
class SingularMap:
    """
    g(z) = prod_i ((z - p_i)/|z - p_i|)^{d_i} * exp(i psi(z)).

    `trace` holds the boundary samples g0 once the map has been materialized.
    """

    vortices: VortexConfig
    phase: SmoothPhase
    trace: Optional[BoundarySignal] = None

    def evaluate(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        positions = self.vortices.positions
        product = np.exp(1j * self.phase.value(z))
        if len(positions):
            check_away_from(positions, z)
            offsets = z[..., None] - positions
            units = offsets / np.abs(offsets)
            product = product * np.prod(units ** self.vortices.charges, axis=-1)
        return product / np.abs(product)

    def connection(self, z) -> np.ndarray:
        """omega = -i g^{-1} grad g as a complex number omega_x + i omega_y."""
        _, gradient = log_potential(self.vortices.positions, self.vortices.charges, z)
        return perpendicular(gradient) + self.phase.gradient(z)

    def boundary_values(self, angles) -> np.ndarray:
        """
        g on the unit circle; at a boundary vortex the two one-sided limits
        agree for even charge and the common value (i p)^d is used.
        """
        angles = np.asarray(angles, dtype=float)
        points = np.exp(1j * angles)
        product = np.exp(1j * self.phase.trace(angles))
        positions = self.vortices.positions
        if len(positions):
            offsets = points[:, None] - positions[None, :]
            distances = np.abs(offsets)
            coincident = distances <= settings.VORTEX_TOLERANCE
            if np.any(coincident & ~self.vortices.boundary_mask[None, :]):
                raise DomainException("interior vortex on the boundary circle")
            with np.errstate(divide="ignore", invalid="ignore"):
                units = offsets / distances
            units = np.where(coincident, (1j * positions)[None, :], units)
            product = product * np.prod(units ** self.vortices.charges, axis=-1)
        return product / np.abs(product)
