"""Service for the Hodge decomposition of singular maps on the unit disk."""

import logging
from typing import Dict, Tuple

import numpy as np
from scipy.linalg import solve_banded

from app.core.config import settings
from app.core.exceptions import (
    DomainException,
    IncompatibleDataException,
    NumericalContractException,
    ValidationException,
)
from app.models.grid import BoundarySignal, DiskField, PolarGrid
from app.models.hodge import (
    HarmonicField,
    HodgeParts,
    NeumannData,
    PoissonField,
    PotentialA,
    RadialModeField,
)
from app.models.vortex import SingularMap, SmoothPhase, VortexConfig
from app.services.map_service import MapService
from app.utils import potentials
from app.utils.spectral import HolomorphicPolynomial, integer_wavenumbers

logger = logging.getLogger('vortexlab_hodge_service')


class HodgeService:
    """Service computing a, b with -i g^{-1} grad g = grad-perp a + grad b on a fixed grid."""

    def __init__(self, grid: PolarGrid):
        self.grid = grid

    @staticmethod
    def log_potential(vortices: VortexConfig, z) -> Tuple[np.ndarray, np.ndarray]:
        """Phi = sum d log|z - p| with its complex gradient."""
        return potentials.log_potential(vortices.positions, vortices.charges, z)

    @staticmethod
    def mirror_potential(vortices: VortexConfig, z) -> Tuple[np.ndarray, np.ndarray]:
        """
        Zero-Neumann potential sum d (log|z - p| + log|z - p*| - |z|^2 / 2).

        Boundary vortices are their own images and enter with half their charge,
        so each contributes d log|z - p| like Phi does.
        """
        z = np.asarray(z, dtype=complex)
        if np.any(np.abs(z) > 1.0 + settings.BOUNDARY_TOLERANCE):
            raise DomainException("mirror potential is evaluated inside the closed unit disk only")
        return potentials.mirror_potential(vortices.positions, vortices.effective_charges, z)

    @staticmethod
    def harmonic_extension(boundary: BoundarySignal) -> HarmonicField:
        """h(r, theta) = sum c_k r^|k| e^{ik theta} as Re of a polynomial."""
        if boundary.kind != "real":
            raise ValidationException("harmonic extension needs a real boundary signal")
        return HarmonicField(HolomorphicPolynomial.from_modes(boundary.fourier_modes), "real")

    @staticmethod
    def harmonic_conjugate(boundary: BoundarySignal) -> HarmonicField:
        """Conjugate H(h) with grad H = grad-perp h and H(0) = 0."""
        if boundary.kind != "real":
            raise ValidationException("harmonic conjugate needs a real boundary signal")
        return HarmonicField(HolomorphicPolynomial.from_modes(boundary.fourier_modes), "imag")

    @staticmethod
    def neumann_harmonic(beta: BoundarySignal) -> HarmonicField:
        """Harmonic function with radial derivative beta - mean(beta) on the circle, zero at the origin."""
        if beta.kind != "real":
            raise ValidationException("Neumann data must be a real boundary signal")
        return HarmonicField(HolomorphicPolynomial.neumann_from_modes(beta.fourier_modes), "real")

    def trace_count(self, phase: SmoothPhase) -> int:
        count = self.grid.angular_count
        if phase.boundary_phase is not None:
            count = max(count, phase.boundary_phase.count)
        if count <= 2 * phase.degree:
            raise ValidationException(
                f"{count} boundary samples cannot resolve a phase of degree {phase.degree}"
            )
        return count

    def solve_b(self, phase: SmoothPhase, scheme: str = "spectral"):
        """
        Solve Laplace(b) = Laplace(psi) with b = 0 on the circle.

        The spectral scheme writes b = psi_poly - H[psi_poly on the circle]; the
        finite-difference scheme solves every angular mode on a uniform radial mesh.
        """
        if scheme == "finite_difference":
            return self.solve_b_finite_difference(phase)
        if scheme != "spectral":
            raise ValidationException(f"unknown Poisson scheme {scheme!r}")
        polynomial = phase.polynomial_part
        count = self.trace_count(polynomial)
        angles = 2.0 * np.pi * np.arange(count) / count
        correction = self.harmonic_extension(BoundarySignal(polynomial.trace(angles)))
        return PoissonField(polynomial, correction)

    def solve_b_finite_difference(self, phase: SmoothPhase) -> RadialModeField:
        """
        Per-mode three-point radial solve on r_j = j/M with b(1) = 0.

        Mode k vanishes at the origin for k != 0; for k = 0 the symmetric
        ghost node gives Laplace(b)(0) = 4 (b_1 - b_0) / h^2.
        """
        polynomial = phase.polynomial_part
        radial_count = self.grid.radial_count
        angular_count = self.grid.angular_count
        h = 1.0 / radial_count
        radii = h * np.arange(radial_count + 1)
        angles = 2.0 * np.pi * np.arange(angular_count) / angular_count
        points = radii[:, None] * np.exp(1j * angles)[None, :]
        modes = np.fft.fft(polynomial.laplacian(points), axis=1) / angular_count
        wavenumbers = integer_wavenumbers(angular_count)
        keep = np.nonzero(np.abs(wavenumbers) <= max(polynomial.degree, 0))[0]

        interior = radii[1:radial_count]
        profiles = np.zeros((radial_count + 1, keep.size), dtype=complex)
        for column, index in enumerate(keep):
            k = wavenumbers[index]
            banded = np.zeros((3, radial_count), dtype=complex)
            rhs = np.array(modes[:radial_count, index], dtype=complex)
            banded[1, 1:] = -2.0 / h ** 2 - (k / interior) ** 2
            banded[0, 2:] = 1.0 / h ** 2 + 1.0 / (2.0 * h * interior[:-1])
            banded[2, :-1] = 1.0 / h ** 2 - 1.0 / (2.0 * h * interior)
            if k == 0:
                banded[1, 0] = -4.0 / h ** 2
                banded[0, 1] = 4.0 / h ** 2
            else:
                banded[1, 0] = 1.0
                banded[0, 1] = 0.0
                rhs[0] = 0.0
            profiles[:radial_count, column] = solve_banded((1, 1), banded, rhs)
        logger.debug(f"[HodgeService] Finite-difference solve over {keep.size} modes, {radial_count} radial cells")
        return RadialModeField(radii, profiles, wavenumbers[keep])

    def decompose(self, singular_map: SingularMap, scheme: str = "spectral") -> HodgeParts:
        """
        a = Phi - H(h0) + c with h0 the harmonic extension of psi on the circle,
        b from solve_b; c makes the disk average of a vanish.

        Raises:
            NumericalContractException: if b does not vanish on the circle
        """
        try:
            grid = self.grid
            phase = singular_map.phase
            b = self.solve_b(phase, scheme)

            count = self.trace_count(phase)
            angles = 2.0 * np.pi * np.arange(count) / count
            trace = BoundarySignal(phase.trace(angles))
            boundary_harmonic = self.harmonic_extension(trace)
            remainder = self.harmonic_conjugate(trace).scaled(-1.0)

            a = PotentialA(singular_map.vortices, remainder)
            points = grid.points
            mean = grid.integrate(a.value(points)) / grid.area
            a = a.shifted(-mean)
            a_values = a.value(points)
            b_values = b.value(points)

            residual_mean = grid.integrate(a_values) / grid.area
            if abs(residual_mean) > settings.MEAN_TOLERANCE:
                raise NumericalContractException(f"average of a is {residual_mean:.3e} after normalization")
            boundary_b = float(np.max(np.abs(b.value(np.exp(1j * angles)))))
            if scheme == "spectral" and boundary_b > settings.TRACE_TOLERANCE:
                raise NumericalContractException(f"b has boundary trace {boundary_b:.3e}")

            logger.debug(f"[HodgeService] Decomposed map with {len(singular_map.vortices)} vortices, c = {-mean:.6g}")
            return HodgeParts(
                grid=grid,
                a=a,
                b=b,
                a_field=DiskField(grid, a_values),
                b_field=DiskField(grid, b_values),
                boundary_harmonic=boundary_harmonic,
            )
        except (NumericalContractException, ValidationException):
            raise
        except Exception as e:
            logger.error(f"[HodgeService] Decomposition failed: {str(e)}")
            raise NumericalContractException(f"Failed to decompose map: {str(e)}")

    @staticmethod
    def neumann_data(vortices: VortexConfig, trace: BoundarySignal) -> NeumannData:
        """
        beta = lambda' - sum_interior d dnu log|x - p| - (1/2) sum_boundary d.

        Raises:
            IncompatibleDataException: if 2 pi sum_int d + pi sum_bdy d - int lambda'
                exceeds the compatibility tolerance
        """
        derivative = MapService.lift_derivative(trace)
        interior = vortices.interior
        boundary = vortices.boundary
        defect = (
            2.0 * np.pi * interior.charge_sum(False)
            + np.pi * boundary.charge_sum(True)
            - derivative.integral()
        )
        if abs(defect) > settings.COMPATIBILITY_TOLERANCE:
            raise IncompatibleDataException(
                f"boundary data and vortices are incompatible: defect integral {defect:.6g}", defect
            )

        points = np.exp(1j * trace.angles)
        beta = derivative.samples.copy()
        for vortex in interior:
            offset = points - vortex.position
            beta -= vortex.charge * np.real(np.conj(points) * offset) / np.abs(offset) ** 2
        beta -= 0.5 * boundary.charge_sum(True)
        return NeumannData(BoundarySignal(beta), defect)

    def mirror_assembly(self, vortices: VortexConfig, trace: BoundarySignal) -> PotentialA:
        """
        a = sum w_i m_i + (Q/2)|z|^2 + H + c, m_i the mirror potentials, w_i the
        effective charges, Q = sum w_i and H the Neumann extension of lambda' - Q.

        The quadratic terms cancel, so a is assembled from each log|z - p| and its
        image log|z - p*|; boundary vortices are their own image. c gives zero mean.

        Raises:
            IncompatibleDataException: if Q differs from the boundary degree
        """
        derivative = MapService.lift_derivative(trace)
        total = float(np.sum(vortices.effective_charges)) if len(vortices) else 0.0
        defect = 2.0 * np.pi * total - derivative.integral()
        if abs(defect) > settings.COMPATIBILITY_TOLERANCE:
            raise IncompatibleDataException(
                f"vortex charges {total:g} do not match the boundary degree: defect integral {defect:.6g}", defect
            )
        harmonic = self.neumann_harmonic(BoundarySignal(derivative.samples - total))

        interior = vortices.interior
        images = potentials.mirror_points(interior.positions) if len(interior) else np.zeros(0, dtype=complex)
        present = ~np.isnan(images)
        a = PotentialA(
            vortices,
            harmonic,
            image_positions=images[present],
            image_charges=interior.charges[present].astype(float) if len(interior) else np.zeros(0),
        )
        points = self.grid.points
        return a.shifted(-self.grid.integrate(a.value(points)) / self.grid.area)

    def remainder_neumann_gap(self, parts: HodgeParts, data: NeumannData) -> float:
        """max |d_nu (a - Phi) - beta| at the boundary sample angles."""
        points = np.exp(1j * data.beta.angles)
        _, gradient = parts.a.remainder(points)
        normal = np.real(np.conj(points) * gradient)
        return float(np.max(np.abs(normal - data.beta.samples)))

    def reconstruction_residual(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        exclusion: float = settings.EXCLUSION_RADIUS
    ) -> float:
        """max |grad-perp a + grad b - omega| over nodes at least `exclusion` away from every vortex."""
        points = self.grid.points
        mask = self.grid.distance_to(singular_map.vortices.positions) >= exclusion
        if not np.any(mask):
            return 0.0
        selected = points[mask]
        reconstructed = potentials.perpendicular(parts.a.gradient(selected)) + parts.b.gradient(selected)
        return float(np.max(np.abs(reconstructed - singular_map.connection(selected))))

    def dbar_residual(
        self,
        singular_map: SingularMap,
        parts: HodgeParts,
        exclusion: float = settings.EXCLUSION_RADIUS,
        step: float = settings.DBAR_STEP
    ) -> Dict[str, float]:
        """
        Centred-difference dbar of w = e^a g against the closed form w (-b_y + i b_x) / 2.

        Values are relative to max(1, |w|) at each node.
        """
        points = self.grid.points
        mask = self.grid.distance_to(singular_map.vortices.positions) >= exclusion
        selected = points[mask]
        if selected.size == 0:
            return {"residual": 0.0, "closed_form": 0.0, "agreement": 0.0}

        def w(z):
            return np.exp(parts.a.value(z)) * singular_map.evaluate(z)

        dx = (w(selected + step) - w(selected - step)) / (2.0 * step)
        dy = (w(selected + 1j * step) - w(selected - 1j * step)) / (2.0 * step)
        numerical = 0.5 * (dx + 1j * dy)
        values = w(selected)
        gradient_b = parts.b.gradient(selected)
        closed = 0.5 * values * (-gradient_b.imag + 1j * gradient_b.real)
        scale = np.maximum(1.0, np.abs(values))
        return {
            "residual": float(np.max(np.abs(numerical) / scale)),
            "closed_form": float(np.max(np.abs(closed) / scale)),
            "agreement": float(np.max(np.abs(numerical - closed) / scale)),
        }
