"""Conservative clipping engine."""

from feasible_region.engine.clip_engine import (
    BoundViolation,
    FeasibleRegion,
    RegionKind,
    RegionSnapshot,
    SnapshotEntry,
    new_box,
)
from feasible_region.engine.constraint_normalizer import (
    NormalizedConstraint,
    RawConstraint,
    ZeroNormalError,
)
from feasible_region.engine.rounding_kernel import (
    BINARY32,
    BINARY64,
    FloatFormat,
    ScalarFormatError,
    get_format,
)

__all__ = [
    "BINARY32",
    "BINARY64",
    "BoundViolation",
    "FeasibleRegion",
    "FloatFormat",
    "NormalizedConstraint",
    "RawConstraint",
    "RegionKind",
    "RegionSnapshot",
    "ScalarFormatError",
    "SnapshotEntry",
    "ZeroNormalError",
    "get_format",
    "new_box",
]
