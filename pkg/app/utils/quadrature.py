"""
Quadrature rules for polar grids: composite Gauss-Radau panels in r,
composite Radau panels in log r, compensated reductions.
"""

import math
from functools import lru_cache
from typing import Iterable, List, Sequence, Tuple

import numpy as np
from scipy import special


@lru_cache(maxsize=64)
def radau_rule(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Gauss-Radau rule on [-1, 1] with the right endpoint as a node.

    Args:
        order: Number of nodes (>= 2)

    Returns:
        Tuple of (nodes, weights), nodes increasing, last node equal to 1
    """
    if order < 2:
        raise ValueError(f"Radau rule needs at least 2 nodes, got {order}")
    # Interior nodes are Gauss-Jacobi nodes for the weight (1 - x)
    interior, jacobi_weights = special.roots_jacobi(order - 1, 1.0, 0.0)
    interior_weights = jacobi_weights / (1.0 - interior)
    nodes = np.append(interior, 1.0)
    weights = np.append(interior_weights, 2.0 - interior_weights.sum())
    return nodes, weights


def radial_breakpoints(
    panel_count: int,
    center_radii: Sequence[float],
    spread: float
) -> np.ndarray:
    """
    Panel breakpoints on [0, 1], clustered geometrically around center radii.

    Refinement points rho +/- spread * 2**-j are added level by level, coarse
    first, while the panel budget allows; remaining panels come from halving
    the widest panel.

    Args:
        panel_count: Total number of panels wanted
        center_radii: Radii around which to refine
        spread: Half width of the coarsest refinement level

    Returns:
        Increasing breakpoints starting at 0 and ending at 1
    """
    points = {0.0, 1.0}
    if center_radii:
        levels = max(1, panel_count // (4 * len(center_radii)))
        candidates: List[float] = []
        for level in range(levels):
            offset = spread * 2.0 ** (-level)
            for rho in center_radii:
                candidates.extend([rho - offset, rho + offset])
        for candidate in candidates:
            if len(points) - 1 >= panel_count:
                break
            if 0.0 < candidate < 1.0 and all(abs(candidate - p) > 1e-12 for p in points):
                points.add(candidate)

    breakpoints = sorted(points)
    while len(breakpoints) - 1 < panel_count:
        widths = np.diff(breakpoints)
        widest = int(np.argmax(widths))
        midpoint = 0.5 * (breakpoints[widest] + breakpoints[widest + 1])
        breakpoints.insert(widest + 1, midpoint)
    return np.asarray(breakpoints)


def panel_orders(total: int, panel_count: int) -> List[int]:
    """Split `total` nodes over panels as evenly as possible, extras first."""
    base, extra = divmod(total, panel_count)
    return [base + 1 if i < extra else base for i in range(panel_count)]


def composite_radau(breakpoints: np.ndarray, orders: Sequence[int]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Radau rule for the measure r dr on [breakpoints[0], breakpoints[-1]].

    Returns:
        Tuple of (radial nodes, radial weights); weights include the factor r
    """
    nodes: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    for (left, right), order in zip(zip(breakpoints[:-1], breakpoints[1:]), orders):
        reference_nodes, reference_weights = radau_rule(order)
        half = 0.5 * (right - left)
        panel_nodes = left + half * (reference_nodes + 1.0)
        panel_nodes[-1] = right
        nodes.append(panel_nodes)
        weights.append(half * reference_weights * panel_nodes)
    return np.concatenate(nodes), np.concatenate(weights)


def log_annulus_rule(
    inner: float,
    outer: float,
    panel_count: int,
    order: int
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Radau rule for r dr on [inner, outer], panels uniform in log r.

    With r = e^s the integrand picks up e^{2s}; algebraic tails such as r^-4
    become exponentials in s and are integrated to spectral accuracy.
    """
    reference_nodes, reference_weights = radau_rule(order)
    edges = np.linspace(math.log(inner), math.log(outer), panel_count + 1)
    nodes: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    for left, right in zip(edges[:-1], edges[1:]):
        half = 0.5 * (right - left)
        s = left + half * (reference_nodes + 1.0)
        r = np.exp(s)
        nodes.append(r)
        weights.append(half * reference_weights * r * r)
    nodes[-1][-1] = outer
    return np.concatenate(nodes), np.concatenate(weights)


def compensated_sum(values: Iterable[float]) -> float:
    """Correctly rounded sum in a fixed traversal order."""
    return math.fsum(values)


def weighted_sum(weights: np.ndarray, values: np.ndarray) -> float:
    """Compensated sum of weights * values, traversed in C order."""
    products = np.asarray(weights, dtype=float) * np.asarray(values, dtype=float)
    return math.fsum(products.ravel().tolist())
