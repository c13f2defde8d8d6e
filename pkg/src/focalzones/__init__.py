"""Focal decomposition and Brillouin zones of closed hyperbolic surfaces.

Surfaces are quotients of the Poincare disk by the standard genus-g
surface groups (regular 4g-gon); everything is computed on a finite,
certified ball of the orbit of 0.
"""

__version__ = "0.1.0"

from .errors import (
    CoverStallError,
    DegeneracyError,
    FocalError,
    IncompleteDomainError,
    InvalidBoundError,
    MatchingError,
    MissingZoneError,
    TruncationError,
)
from .hypkernel import (
    BoundaryAngle,
    DiskPoint,
    Geodesic,
    Interval,
    MobiusMap,
    Side,
    bisector,
    dist_origin,
    geodesic_intersection,
    hyp_dist,
    interval_at_infinity,
    mobius_apply,
    mobius_compose,
    mobius_inverse,
    side_of,
    signed_distance,
)
from .fuchsian import (
    OrbitBall,
    OrbitPoint,
    SurfaceGroup,
    counting_discrepancy,
    orbit_ball,
    relator_check,
    surface_group,
)
from .focal_web import (
    BisectorLine,
    FocalIndices,
    Web,
    ZoneMap,
    build_web,
    classify_grid,
    dirichlet_domain,
    indices,
    kappa,
    zone_radius_bracket,
    zone_radius_stats,
)
from .spectrum import EventKind, SpectrumEvent, focal_spectrum, intersection_events, spectrum_compare, tangency_events
from .boundary import (
    IntervalSet,
    RotationReport,
    cover_interval,
    interval_ratio_profile,
    interval_set,
    nested_chain,
    rotation_detect,
    rotation_matching,
    verify_cover,
)
from .euclid_oracle import PlanePoint, euclid_indices, euclid_zone_area
