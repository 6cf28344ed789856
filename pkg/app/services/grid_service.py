"""Service for building polar grids and integrating sampled fields."""

import logging
from typing import Optional, Sequence

import numpy as np

from app.core.config import settings
from app.core.exceptions import ValidationException
from app.models.grid import BoundarySignal, DiskField, PolarGrid
from app.utils.quadrature import (
    composite_radau,
    log_annulus_rule,
    panel_orders,
    radial_breakpoints,
)

logger = logging.getLogger('vortexlab_grid_service')


def _validate_counts(radial_count: int, angular_count: int) -> None:
    if radial_count < settings.MIN_RADIAL_NODES:
        raise ValidationException(
            f"radial node count must be at least {settings.MIN_RADIAL_NODES}, got {radial_count}"
        )
    if angular_count % 2 != 0:
        raise ValidationException(f"angular count must be even, got {angular_count}")
    if angular_count < settings.MIN_ANGULAR_NODES:
        raise ValidationException(
            f"angular count must be at least {settings.MIN_ANGULAR_NODES}, got {angular_count}"
        )


def _distinct_radii(centers: Sequence[complex], scale: float = 1.0) -> list:
    radii = []
    for center in centers:
        rho = abs(complex(center)) / scale
        if all(abs(rho - other) > 1e-12 for other in radii):
            radii.append(rho)
    return sorted(radii)


class GridService:
    """Service for polar discretizations of the disk, the truncated plane and the circle."""

    @staticmethod
    def build_polar_grid(
        radial_count: int,
        angular_count: int,
        centers: Sequence[complex] = (),
        angle_offset: Optional[float] = None
    ) -> PolarGrid:
        """
        Build a composite Gauss-Radau polar grid of the unit disk.

        Args:
            radial_count: Number of radial nodes (>= 8)
            angular_count: Number of uniform angles (even, >= 16)
            centers: Points near whose radius the radial panels are refined
            angle_offset: Angular shift of the nodes; by default 0, or half a
                step when a center would coincide with a node

        Returns:
            PolarGrid with last radial node equal to 1
        """
        _validate_counts(radial_count, angular_count)
        centers = tuple(complex(c) for c in centers)
        for center in centers:
            if abs(center) > 1.0 + settings.BOUNDARY_TOLERANCE:
                raise ValidationException(
                    f"refinement center ({center.real:.6g}, {center.imag:.6g}) lies outside the closed unit disk"
                )

        panel_count = max(1, radial_count // settings.PANEL_ORDER)
        breakpoints = radial_breakpoints(
            panel_count, _distinct_radii(centers), settings.REFINEMENT_SPREAD
        )
        nodes, weights = composite_radau(breakpoints, panel_orders(radial_count, panel_count))

        offset = 0.0 if angle_offset is None else float(angle_offset)
        grid = PolarGrid(nodes, weights, angular_count, offset, 1.0, centers)
        if angle_offset is None and centers and np.min(grid.distance_to(centers)) <= 1e-9:
            logger.debug("[GridService] Shifting angles by half a step to keep vortices off the nodes")
            grid = PolarGrid(nodes, weights, angular_count, np.pi / angular_count, 1.0, centers)
        logger.debug(
            f"[GridService] Built {radial_count}x{angular_count} grid with {panel_count} panels, "
            f"{len(centers)} refinement centers"
        )
        return grid

    @staticmethod
    def build_uniform_grid(radial_count: int, angular_count: int, angle_offset: float = 0.0) -> PolarGrid:
        """Uniform radii k/Nr with trapezoidal weights; used for winding detection."""
        _validate_counts(radial_count, angular_count)
        step = 1.0 / radial_count
        nodes = step * np.arange(1, radial_count + 1)
        weights = step * nodes
        weights[-1] = 0.5 * step
        return PolarGrid(nodes, weights, angular_count, angle_offset)

    @staticmethod
    def build_annulus_panels(inner: float, outer: float, panels: int, order: int):
        """Composite Radau panels uniform in log r on [inner, outer]."""
        if not 0.0 < inner < outer:
            raise ValidationException(f"annulus needs 0 < inner < outer, got [{inner}, {outer}]")
        return log_annulus_rule(inner, outer, panels, order)

    @staticmethod
    def build_plane_grid(
        truncation_radius: float,
        centers: Sequence[complex],
        radial_count: int = settings.DEFAULT_RADIAL_NODES,
        angular_count: int = settings.DEFAULT_ANGULAR_NODES
    ) -> PolarGrid:
        """
        Grid of the disk of radius R: a refined inner disk of radius 2 max|c|
        joined to a log-r annulus reaching R.
        """
        _validate_counts(radial_count, angular_count)
        centers = tuple(complex(c) for c in centers)
        extent = max((abs(c) for c in centers), default=0.0)
        inner = 2.0 * extent if extent > 0.0 else 1.0
        if truncation_radius < 2.0 * inner:
            raise ValidationException(
                f"truncation radius {truncation_radius} must be at least 4 times the largest |p| ({extent})"
            )

        panel_count = max(1, radial_count // settings.PANEL_ORDER)
        breakpoints = inner * radial_breakpoints(
            panel_count, _distinct_radii(centers, inner), settings.REFINEMENT_SPREAD
        )
        inner_nodes, inner_weights = composite_radau(breakpoints, panel_orders(radial_count, panel_count))
        outer_nodes, outer_weights = log_annulus_rule(
            inner, truncation_radius, settings.PLANE_OUTER_PANELS, settings.PLANE_OUTER_ORDER
        )
        nodes = np.concatenate([inner_nodes, outer_nodes])
        weights = np.concatenate([inner_weights, outer_weights])

        grid = PolarGrid(nodes, weights, angular_count, 0.0, float(truncation_radius), centers)
        if centers and np.min(grid.distance_to(centers)) <= 1e-9:
            grid = PolarGrid(nodes, weights, angular_count, np.pi / angular_count, float(truncation_radius), centers)
        return grid

    @staticmethod
    def integrate_disk(field: DiskField) -> float:
        """Sum of weight * value over all nodes in a fixed order."""
        if field.kind != "scalar":
            raise ValidationException("integrate_disk needs a scalar field, got a covector field")
        return field.grid.integrate(field.values)

    @staticmethod
    def boundary_transform(signal: BoundarySignal) -> BoundarySignal:
        """Populate the Fourier modes and check the spectral round trip."""
        if signal.count % 2 != 0:
            raise ValidationException(f"boundary sample count must be even, got {signal.count}")
        transformed = BoundarySignal(signal.samples, signal.kind, np.fft.fft(signal.samples) / signal.count)
        error = np.max(np.abs(transformed.inverse() - signal.samples))
        scale = max(1.0, float(np.max(np.abs(signal.samples))))
        if error > settings.ROUND_TRIP_TOLERANCE * scale:
            logger.warning(f"[GridService] Spectral round trip error {error:.3e} exceeds tolerance")
        return transformed
