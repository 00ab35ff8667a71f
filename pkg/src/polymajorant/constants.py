"""
Polymajorant constants.

Enum and constant definitions shared by the partition, bridge and majorant
modules and by the command-line front end.
"""

from enum import Enum


class Monotonicity(Enum):
    """Sign class of F' on a refined cell."""
    INCREASING = "increasing"
    DECREASING = "decreasing"
    CONSTANT = "constant"


class Curvature(Enum):
    """Sign class of F'' on a refined cell."""
    STRICTLY_CONCAVE = "strictly-concave"
    LINEAR = "linear"
    STRICTLY_CONVEX = "strictly-convex"


class Side(Enum):
    """Which end of a bridge is held fixed by a tangency search."""
    LEFT = "left"
    RIGHT = "right"


class OutputFormat(Enum):
    """Serialisations understood by the CLI writers."""
    JSON = "json"
    CSV = "csv"


class CommandName(Enum):
    """Subcommands of the ``polymajorant`` CLI."""
    COMPONENTS = "components"
    MAJORANT = "majorant"
    LEVEL = "level"
    PARTITION = "partition"
    SPLINE = "spline"
    BOUND = "bound"
    COMPARE = "compare"
    DEMO = "demo"


class TraceEvent(Enum):
    """Event kinds emitted to a march trace sink."""
    ENDPOINT_CANDIDATES = "endpoint_candidates"
    PAIR_CANDIDATES = "pair_candidates"
    VERIFY = "verify"
    PRUNE = "prune"
    ACCEPT = "accept"
    DISCARD = "discard"
    ORDERING = "ordering"


# Environment variable multiplying every numeric tolerance
TOL_SCALE_ENV = "LCM_TOL_SCALE"

# Significant digits used for CSV float output
CSV_FLOAT_FORMAT = ".17g"

# Header of ``majorant --out csv``
MAJORANT_CSV_HEADER = ("x", "F", "Fhat", "level")
LEVEL_CSV_HEADER = ("x", "level")

# Cells whose curvature separates concave groups
SEPARATING_CURVATURES = {Curvature.LINEAR, Curvature.STRICTLY_CONVEX}
