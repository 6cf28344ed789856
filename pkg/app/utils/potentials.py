"""
Closed-form logarithmic and mirror potentials of point charges in the plane.
Gradients are returned as complex numbers gx + i*gy.
"""

from typing import Tuple

import numpy as np

from app.core.config import settings
from app.core.exceptions import DomainException


def _offsets(positions: np.ndarray, z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return z[..., None] - np.asarray(positions, dtype=complex)


def check_away_from(positions: np.ndarray, z: np.ndarray, tolerance: float = None) -> None:
    """Raise DomainException if any query point coincides with a charge."""
    if len(positions) == 0:
        return
    tolerance = settings.VORTEX_TOLERANCE if tolerance is None else tolerance
    distances = np.abs(_offsets(positions, z))
    if np.any(distances <= tolerance):
        index = np.unravel_index(int(np.argmin(distances)), distances.shape)
        position = complex(np.asarray(positions)[index[-1]])
        raise DomainException(
            f"evaluation at vortex point ({position.real:.6g}, {position.imag:.6g})"
        )


def log_potential(positions: np.ndarray, charges: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Phi(z) = sum_i d_i log|z - p_i| and its gradient sum_i d_i (z - p_i)/|z - p_i|^2.

    Returns:
        Tuple of (values, complex gradients)
    """
    z = np.asarray(z, dtype=complex)
    if len(positions) == 0:
        return np.zeros(z.shape), np.zeros(z.shape, dtype=complex)
    check_away_from(positions, z)
    offsets = _offsets(positions, z)
    charges = np.asarray(charges, dtype=float)
    values = np.sum(charges * np.log(np.abs(offsets)), axis=-1)
    gradients = np.sum(charges / np.conj(offsets), axis=-1)
    return values, gradients


def mirror_points(positions: np.ndarray) -> np.ndarray:
    """p / |p|^2 for p != 0; NaN marks the origin, whose mirror term is dropped."""
    positions = np.asarray(positions, dtype=complex)
    mirrored = np.full(positions.shape, np.nan + 0j)
    nonzero = np.abs(positions) > settings.VORTEX_TOLERANCE
    mirrored[nonzero] = positions[nonzero] / np.abs(positions[nonzero]) ** 2
    return mirrored


def mirror_pair_potential(positions: np.ndarray, charges: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    sum_i d_i (log|z - p_i| + log|z - p_i*|), p* = p/|p|^2, mirror dropped at p = 0.

    Returns:
        Tuple of (values, complex gradients)
    """
    values, gradients = log_potential(positions, charges, z)
    mirrored = mirror_points(positions)
    present = ~np.isnan(mirrored)
    if np.any(present):
        boundary = np.abs(np.abs(np.asarray(positions)[present]) - 1.0) <= settings.BOUNDARY_TOLERANCE
        images = mirrored[present]
        image_charges = np.asarray(charges, dtype=float)[present]
        if np.any(boundary):
            # A boundary charge is its own image; its singularity is already checked.
            image_values, image_gradients = image_log_potential(images, image_charges, z)
        else:
            image_values, image_gradients = log_potential(images, image_charges, z)
        values = values + image_values
        gradients = gradients + image_gradients
    return values, gradients


def image_log_potential(positions: np.ndarray, charges: np.ndarray, z: np.ndarray):
    offsets = _offsets(positions, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        values = np.sum(charges * np.log(np.abs(offsets)), axis=-1)
        gradients = np.sum(charges / np.conj(offsets), axis=-1)
    return values, gradients


def mirror_potential(positions: np.ndarray, charges: np.ndarray, z: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    sum_i d_i (log|z - p_i| + log|z - p_i*| - |z|^2/2): zero Neumann data on the unit circle.

    Returns:
        Tuple of (values, complex gradients)
    """
    z = np.asarray(z, dtype=complex)
    values, gradients = mirror_pair_potential(positions, charges, z)
    total = float(np.sum(charges)) if len(charges) else 0.0
    return values - 0.5 * total * np.abs(z) ** 2, gradients - total * z


def perpendicular(gradient: np.ndarray) -> np.ndarray:
    """Rotate a complex gradient by +90 degrees: (gx, gy) -> (-gy, gx)."""
    return 1j * gradient
