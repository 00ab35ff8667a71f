"""
Polymajorant package exports.
"""

__version__ = "0.1.0"

from .bridge import (
    BridgeCandidate,
    PruneContext,
    SexticContext,
    build_sextic,
    candidate_bridges,
    check_nested_ordering,
    prune,
    reduced_pair_polynomial,
    slope_range,
    tangency_direct,
    verify_bridge,
)
from .config import DEFAULT_TOLERANCES, Tolerances
from .constants import Curvature, Monotonicity, OutputFormat, Side
from .exceptions import (
    ContinuityError,
    ContractViolation,
    DegenerateDegreeError,
    DomainError,
    InputFormatError,
    SplineInputError,
)
from .hull import ComparisonMetrics, GridHull, compare, grid_upper_hull
from .majorant import (
    MajorantResult,
    assemble_majorant,
    components,
    components_left,
    contraction_gap,
    integrate_level,
    least_concave_majorant,
    level_function,
)
from .partition import (
    Cell,
    ConcaveIncreasingSet,
    MaxStructure,
    RefinedPartition,
    concave_increasing_set,
    global_max,
    group_by_convex_separators,
    refine,
)
from .poly import (
    CubicPiece,
    PiecewiseCubic,
    PolyCoeffs6,
    check_continuity,
    derivative,
    evaluate,
    real_roots_in,
    reflect,
)
from .spline import (
    ErrorCertificate,
    MeshPlan,
    SplineProblem,
    certify,
    clamped_spline,
    mesh_for_tolerance,
)

__all__ = [
    "__version__",
    # Polynomials
    "CubicPiece",
    "PiecewiseCubic",
    "PolyCoeffs6",
    "check_continuity",
    "derivative",
    "evaluate",
    "real_roots_in",
    "reflect",
    # Partition
    "Cell",
    "ConcaveIncreasingSet",
    "MaxStructure",
    "RefinedPartition",
    "concave_increasing_set",
    "global_max",
    "group_by_convex_separators",
    "refine",
    # Bridges
    "BridgeCandidate",
    "PruneContext",
    "SexticContext",
    "build_sextic",
    "candidate_bridges",
    "check_nested_ordering",
    "prune",
    "reduced_pair_polynomial",
    "slope_range",
    "tangency_direct",
    "verify_bridge",
    # Majorant
    "MajorantResult",
    "assemble_majorant",
    "components",
    "components_left",
    "contraction_gap",
    "integrate_level",
    "least_concave_majorant",
    "level_function",
    # Splines
    "ErrorCertificate",
    "MeshPlan",
    "SplineProblem",
    "certify",
    "clamped_spline",
    "mesh_for_tolerance",
    # Oracle
    "ComparisonMetrics",
    "GridHull",
    "compare",
    "grid_upper_hull",
    # Configuration and errors
    "DEFAULT_TOLERANCES",
    "Tolerances",
    "Curvature",
    "Monotonicity",
    "OutputFormat",
    "Side",
    "ContinuityError",
    "ContractViolation",
    "DegenerateDegreeError",
    "DomainError",
    "InputFormatError",
    "SplineInputError",
]
