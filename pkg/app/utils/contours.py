"""
Level-set extraction on polar samples by marching squares.
"""

from typing import List, Tuple

import numpy as np
from skimage import measure


def polar_level_contours(
    values: np.ndarray,
    radial_nodes: np.ndarray,
    angles: np.ndarray,
    level: float
) -> List[np.ndarray]:
    """
    Extract the level curves {values = level} of samples on a polar grid.

    The angular direction is closed by repeating the first column, so curves
    that wind around the origin come back as a single open path.

    Args:
        values: Samples of shape (Nr, Ntheta)
        radial_nodes: Increasing radii of the rows
        angles: Uniform angles of the columns
        level: Contour level

    Returns:
        List of complex vertex arrays, one per contour piece
    """
    wrapped = np.concatenate([values, values[:, :1]], axis=1)
    if np.nanmax(wrapped) < level or np.nanmin(wrapped) > level:
        return []
    contours = measure.find_contours(wrapped, level)
    rows = np.arange(values.shape[0], dtype=float)
    columns = np.arange(values.shape[1] + 1, dtype=float)
    step = 2.0 * np.pi / values.shape[1]
    extended_angles = np.append(angles, angles[-1] + step)

    curves = []
    for contour in contours:
        r = np.interp(contour[:, 0], rows, radial_nodes)
        theta = np.interp(contour[:, 1], columns, extended_angles)
        curves.append(r * np.exp(1j * theta))
    return curves


def segment_midpoints(curve: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Midpoints and lengths of the straight segments of a vertex chain."""
    if curve.shape[0] < 2:
        return np.zeros(0, dtype=complex), np.zeros(0)
    starts, ends = curve[:-1], curve[1:]
    return 0.5 * (starts + ends), np.abs(ends - starts)
