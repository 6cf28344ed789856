"""Service for the flat unit torus: periodic decomposition and energy with the harmonic-form term."""

import logging
from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import NumericalContractException, ValidationException
from app.models.energy import EnergyBreakdown
from app.models.torus import TorusDecomposition, TorusMap
from app.utils.quadrature import compensated_sum
from app.utils.spectral import sech, weight_f

logger = logging.getLogger('vortexlab_torus_service')


class TorusService:
    """Service for omega = grad-perp a + grad b + h on R^2 / Z^2."""

    def __init__(self, truncation: int = settings.TORUS_TRUNCATION, factor: int = settings.TORUS_QUADRATURE_FACTOR):
        if truncation < 1:
            raise ValidationException(f"Fourier truncation must be positive, got {truncation}")
        if factor < 1:
            raise ValidationException(f"quadrature factor must be positive, got {factor}")
        self.truncation = truncation
        self.factor = factor

    @property
    def size(self) -> int:
        return max(self.factor * 2 * self.truncation, 2 * self.truncation + 2)

    def green_modes(self, torus_map: TorusMap) -> np.ndarray:
        """
        Fourier coefficients of a with Laplace(a) = 2 pi sum d delta_p:
        a_k = -sum d e^{-2 pi i k.p} / (2 pi |k|^2), a_0 = 0, |k_x|, |k_y| <= K.
        """
        k = np.arange(-self.truncation, self.truncation + 1)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        source = np.zeros(kx.shape, dtype=complex)
        for p, d in zip(torus_map.positions, torus_map.charges):
            source += d * np.exp(-2j * np.pi * (kx * p.real + ky * p.imag))
        squared = (kx ** 2 + ky ** 2).astype(float)
        squared[self.truncation, self.truncation] = np.inf
        return -source / (2.0 * np.pi * squared)

    def _synthesize(self, modes: np.ndarray) -> np.ndarray:
        """Real samples of sum_k c_k e^{2 pi i k.x} on the M x M grid."""
        size = self.size
        padded = np.zeros((size, size), dtype=complex)
        k = np.arange(-self.truncation, self.truncation + 1) % size
        np.add.at(padded, (k[:, None], k[None, :]), modes)
        return np.real(np.fft.ifft2(padded)) * size * size

    def torus_decompose(self, torus_map: TorusMap) -> TorusDecomposition:
        """
        a from the truncated periodic Green's function, b = psi - mean(psi), h = 2 pi (m, n).
        """
        try:
            modes = self.green_modes(torus_map)
            k = np.arange(-self.truncation, self.truncation + 1)
            kx, ky = np.meshgrid(k, k, indexing="ij")
            a = self._synthesize(modes)
            a_gradient = self._synthesize(2j * np.pi * kx * modes) + 1j * self._synthesize(2j * np.pi * ky * modes)

            ticks = np.arange(self.size) / self.size
            x, y = np.meshgrid(ticks, ticks, indexing="ij")
            b = torus_map.phase_value(x, y) - torus_map.phase_mean()
            b_gradient = torus_map.phase_gradient(x, y)

            dipole = torus_map.dipole_moment
            if abs(dipole) > settings.VORTEX_TOLERANCE:
                logger.warning(
                    f"[TorusService] Dipole moment ({dipole.real:.6g}, {dipole.imag:.6g}) leaves a period defect; "
                    "the map is single-valued only up to that defect"
                )
            h = torus_map.harmonic_form
            quantization = max(abs(h[0] / (2.0 * np.pi) - round(h[0] / (2.0 * np.pi))),
                               abs(h[1] / (2.0 * np.pi) - round(h[1] / (2.0 * np.pi))))
            if quantization > 1e-10:
                raise NumericalContractException(f"harmonic form is off the 2 pi lattice by {quantization:.3e}")

            logger.debug(f"[TorusService] Decomposed torus map with {len(torus_map.charges)} vortices, K = {self.truncation}")
            return TorusDecomposition(
                truncation=self.truncation,
                size=self.size,
                a_modes=modes,
                a=a,
                a_gradient=a_gradient,
                b=b,
                b_gradient=b_gradient,
                h=h,
            )
        except (NumericalContractException, ValidationException):
            raise
        except Exception as e:
            logger.error(f"[TorusService] Decomposition failed: {str(e)}")
            raise NumericalContractException(f"Failed to decompose torus map: {str(e)}")

    def torus_energy(self, torus_map: TorusMap) -> EnergyBreakdown:
        """
        int f(a)(|omega - h|^2 + |grad a|^2) + 1/4 int |grad b|^2 + 1/4 |h|^2 over the unit cell.

        lift_term evaluates the first integrand a second way, as sech(a)^2 / 4 times the same bracket.
        """
        parts = self.torus_decompose(torus_map)
        cell = parts.cell_area
        a, grad_a, grad_b = parts.a, parts.a_gradient, parts.b_gradient
        connection = 1j * grad_a + grad_b
        bracket = np.abs(connection) ** 2 + np.abs(grad_a) ** 2

        weighted = cell * compensated_sum((weight_f(a) * bracket).ravel().tolist())
        lift = cell * compensated_sum((0.25 * sech(a) ** 2 * bracket).ravel().tolist())
        b_term = 0.25 * cell * compensated_sum((np.abs(grad_b) ** 2).ravel().tolist())
        h_term = 0.25 * (parts.h[0] ** 2 + parts.h[1] ** 2)
        return EnergyBreakdown(
            weighted_term=weighted,
            b_term=b_term,
            h_term=h_term,
            lift_term=lift,
            total=weighted + b_term + h_term,
        )

    def torus_convergence(self, torus_map: TorusMap) -> Tuple[float, float, float]:
        """(E at K, E at 2K, relative change)."""
        coarse = self.torus_energy(torus_map).total
        fine = TorusService(2 * self.truncation, self.factor).torus_energy(torus_map).total
        change = abs(fine - coarse) / max(1.0, abs(fine))
        logger.info(f"[TorusService] Truncation {self.truncation} -> {2 * self.truncation}: relative change {change:.3e}")
        return coarse, fine, change
