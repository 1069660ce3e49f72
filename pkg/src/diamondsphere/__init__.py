"""Equal-area diamond point ensembles on the unit sphere.

Deterministic point families built from piecewise-linear parallel
counts, the companion equal-area partition with its point matching, and
quality metrics: separation, covering, energies, and spherical-cap
discrepancy in exact, randomized, and L2 forms.
"""

from .ensemble import (
    DiamondModel,
    ModelConstants,
    ModelError,
    ModelSpec,
    generate,
    model_constants,
    resolve_thetas,
    simple_model,
    validate,
)
from .geometry import (
    BOUNDARY_TOL,
    NORTH_POLE,
    SOUTH_POLE,
    DegenerateCapError,
    DuplicatePointError,
    PointSet,
    SphericalCap,
    UnitVec,
    cap_area,
    chord_distance,
    circumcap,
    count_in_cap,
    pair_diametral_cap,
    spiral_points,
)
from .metrics import (
    MEAN_CHORD,
    STOLARSKY_CONSTANT,
    CoveringRadius,
    MetricsReport,
    SupDiscrepancy,
    compute_metrics,
    covering_radius,
    equatorial_discrepancy,
    l2_discrepancy_quadrature,
    l2_discrepancy_stolarsky,
    log_energy,
    mean_chord_monte_carlo,
    mesh_ratio,
    polar_cap_profile,
    riesz_energy,
    separation,
    stolarsky_constant_estimate,
    sum_distances,
    sup_discrepancy_estimate,
    sup_discrepancy_exact,
)
from .partition import (
    MatchingReport,
    Partition,
    Region,
    SideLengths,
    VerificationFailure,
    build_partition,
    covering_upper_bound,
    partition_records,
    polar_cap_radius,
    region_area,
    region_area_fraction_exact,
    side_lengths,
    verify_matching,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
