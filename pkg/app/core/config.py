"""Application configuration."""

import os
from typing import Tuple


class Settings:
    """Numerical settings and tolerances."""

    TOOL_NAME: str = "vortexlab"
    VERSION: str = "1.0.0"
    LOG_LEVEL: str = "INFO"

    # Grid defaults
    DEFAULT_RADIAL_NODES: int = 128
    DEFAULT_ANGULAR_NODES: int = 256
    MIN_RADIAL_NODES: int = 8
    MIN_ANGULAR_NODES: int = 16
    PANEL_ORDER: int = 8
    REFINEMENT_SPREAD: float = 0.1
    QUADRATURE_AREA_TOLERANCE: float = 1e-8
    ROUND_TRIP_TOLERANCE: float = 1e-12

    # Plane truncation
    PLANE_TRUNCATION_RADIUS: float = 20.0
    PLANE_OUTER_PANELS: int = 12
    PLANE_OUTER_ORDER: int = 8

    # Maps
    MAX_PHASE_DEGREE: int = 8
    VORTEX_TOLERANCE: float = 1e-10
    BOUNDARY_TOLERANCE: float = 1e-10
    UNIT_MODULUS_TOLERANCE: float = 1e-10
    RESOLVABILITY_MARGIN: float = 1e-9
    CLUSTER_RADIUS_CELLS: int = 1
    MAX_BLOCK_EXPANSION: int = 3

    # Hodge decomposition
    COMPATIBILITY_TOLERANCE: float = 1e-6
    RECONSTRUCTION_TOLERANCE: float = 1e-5
    EXCLUSION_RADIUS: float = 0.05
    MEAN_TOLERANCE: float = 1e-8
    TRACE_TOLERANCE: float = 1e-8

    # Energy
    CONSISTENCY_TOLERANCE: float = 1e-4
    FINITE_DIFFERENCE_STEP: float = 1e-4
    NEGLIGIBLE_VARIATION: float = 1e-9
    DBAR_STEP: float = 1e-4
    EL_TOLERANCE: float = 1e-6
    B_ENERGY_TOLERANCE: float = 1e-8
    EL_BASIS_SIZE: int = 10
    DEGREE_FLAG_THRESHOLD: float = 0.1
    CONFORMALITY_TOLERANCE: float = 1e-5

    # Bounds
    BOUND_TOLERANCE: float = 1e-8
    FLUX_TOLERANCE: float = 0.02
    QUASINORM_MIN_MEASURE: float = 1e-3
    REGULAR_GRADIENT_FLOOR: float = 1e-6
    LEVEL_RETRY_SHIFT: float = 1e-3
    STABILITY_STEPS: int = 10
    STABILITY_GAP: float = 0.01

    # Torus
    TORUS_TRUNCATION: int = 128
    TORUS_QUADRATURE_FACTOR: int = 2
    TORUS_MAX_WAVENUMBER: int = 16

    # Minimization
    DEFAULT_MARGIN: float = 0.02
    DEFAULT_SEED: int = 0
    MAX_EVALUATIONS: int = 2000
    RESTARTS: int = 4
    SIMPLEX_TOLERANCE: float = 1e-6
    SIMPLEX_STEP: float = 0.1
    SIMPLEX_RESTARTS: int = 2
    MINIMIZE_RESOLUTION: Tuple[int, int] = (64, 128)
    GRADIENT_TOLERANCE: float = 1e-3

    # Reports
    REPORT_SIGNIFICANT_DIGITS: int = 12
    DEFAULT_THREADS: int = os.cpu_count() or 1

    # Self test
    SELFTEST_FAMILY_COUNT: int = 50
    SELFTEST_COUNT_BOUND_MAPS: int = 100
    SELFTEST_VARIATION_PAIRS: int = 20
    SELFTEST_FLUX_LEVELS: int = 10
    SELFTEST_FLUX_CEILING: float = 0.4
    QUASINORM_RESOLUTION: Tuple[int, int] = (256, 512)
    QUASINORM_TOLERANCE: float = 0.05
    VARIATION_TOLERANCE: float = 1e-5
    SELFTEST_TORUS_TRUNCATION: int = 8
    ENERGY_ORACLE_TOLERANCE: float = 1e-4
    MIRROR_NEUMANN_TOLERANCE: float = 1e-10
    PLANE_QUANTIZATION_TOLERANCE: float = 0.01
    DEGREE_TOLERANCE: float = 0.02
    TORUS_ENERGY_TOLERANCE: float = 1e-8

    # Exit statuses
    EXIT_SUCCESS: int = 0
    EXIT_VALIDATION: int = 1
    EXIT_NUMERICAL: int = 2


settings = Settings()
