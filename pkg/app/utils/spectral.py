"""
Spectral helpers on the unit circle and overflow-safe weight functions.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.special import expit


def weight_f(t):
    """f(t) = e^{2t} / (1 + e^{2t})^2, evaluated as expit(2t) * expit(-2t)."""
    t = np.asarray(t, dtype=float)
    return expit(2.0 * t) * expit(-2.0 * t)


def antiderivative_F(t):
    """F(t) = -1 / (2 (e^{2t} + 1)); F' = f, F(-inf) = -1/2, F(+inf) = 0."""
    t = np.asarray(t, dtype=float)
    return -0.5 * expit(-2.0 * t)


def sech(t):
    """Overflow-safe hyperbolic secant."""
    t = np.asarray(t, dtype=float)
    decay = np.exp(-np.abs(t))
    return 2.0 * decay / (1.0 + decay * decay)


def integer_wavenumbers(count: int) -> np.ndarray:
    """Signed integer wavenumbers in numpy FFT order."""
    return np.fft.fftfreq(count, d=1.0 / count)


def spectral_derivative(samples: np.ndarray) -> np.ndarray:
    """d/dtheta of a real periodic signal sampled at 2*pi*k/N; the Nyquist mode is dropped."""
    count = samples.shape[-1]
    k = integer_wavenumbers(count)
    modes = np.fft.fft(samples, axis=-1)
    factor = 1j * k
    if count % 2 == 0:
        factor[count // 2] = 0.0
    return np.real(np.fft.ifft(modes * factor, axis=-1))


def _analytic_coefficients(modes: np.ndarray) -> np.ndarray:
    """Ascending coefficients of F with Re F = signal on the circle."""
    count = modes.shape[0]
    half = count // 2
    coefficients = np.zeros(half + 1, dtype=complex)
    coefficients[0] = modes[0].real
    coefficients[1:half] = 2.0 * modes[1:half]
    if count % 2 == 0:
        coefficients[half] = modes[half].real
    else:
        coefficients[half] = 2.0 * modes[half]
    return coefficients


def _trimmed(coefficients: np.ndarray) -> np.ndarray:
    """Drop trailing coefficients below round-off of the largest one."""
    scale = float(np.max(np.abs(coefficients))) if coefficients.size else 0.0
    if scale == 0.0:
        return np.zeros(1, dtype=complex)
    keep = np.nonzero(np.abs(coefficients) > 1e-15 * scale)[0]
    return np.asarray(coefficients[: keep[-1] + 1], dtype=complex)


@dataclass(frozen=True, eq=False)
class HolomorphicPolynomial:
    """F(z) = sum_j c_j z^j with ascending complex coefficients."""

    coefficients: np.ndarray

    @classmethod
    def from_modes(cls, modes: np.ndarray) -> "HolomorphicPolynomial":
        """Polynomial whose real part on |z| = 1 interpolates the signal with these modes."""
        return cls(_trimmed(_analytic_coefficients(modes)))

    @classmethod
    def neumann_from_modes(cls, modes: np.ndarray) -> "HolomorphicPolynomial":
        """Polynomial G, G(0) = 0, whose real part has radial derivative signal - mean on |z| = 1."""
        analytic = _analytic_coefficients(modes)
        coefficients = np.zeros_like(analytic)
        degrees = np.arange(1, analytic.shape[0])
        coefficients[1:] = analytic[1:] / degrees
        return cls(_trimmed(coefficients))

    @property
    def degree(self) -> int:
        return int(self.coefficients.shape[0] - 1)

    def __call__(self, z):
        return P.polyval(np.asarray(z, dtype=complex), self.coefficients)

    def derivative(self, z):
        if self.coefficients.shape[0] < 2:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return P.polyval(np.asarray(z, dtype=complex), P.polyder(self.coefficients))


def harmonic_gradient(derivative: np.ndarray, part: str) -> Tuple[np.ndarray, np.ndarray]:
    """Gradient of Re F (part='real') or Im F (part='imag') from F'."""
    if part == "real":
        return np.real(derivative), -np.imag(derivative)
    return np.imag(derivative), np.real(derivative)
