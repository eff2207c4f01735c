"""Region reports: JSON documents describing a clipped region.

Scalars are written with `float.hex` so that reading a report gives back the
exact snapshot of the region.
"""

import json
import logging
import math
from dataclasses import asdict
from typing import Any, Dict, Iterator, Optional, Tuple

from feasible_region import schema
from feasible_region.engine.clip_engine import (
    FeasibleRegion,
    RegionKind,
    RegionSnapshot,
    SnapshotEntry,
)
from feasible_region.engine.vertex_bounds import VertexBox, exact_homogeneous

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

# Report keys of the vertex box fields
_BOX_KEYS = {"ur": "Ur", "us": "Us", "ud": "Ud", "or_": "Or", "os_": "Os", "od_": "Od"}

# Report keys of the counters
_COUNTER_KEYS = {
    "constraints": "Constraints",
    "divisions": "Divisions",
    "direction_comparisons": "DirectionComparisons",
    "side_tests": "SideTests",
    "exact_fallbacks": "ExactFallbacks",
}


class ReportError(Exception):
    """Exception raised when a region report is invalid."""

    def __init__(self, message: Any) -> None:
        self.message = f"The region report is invalid - {message}"
        super().__init__(self.message)


def _box_to_dict(box: Optional[VertexBox]) -> Optional[Dict[str, str]]:
    if box is None:
        return None
    return {_BOX_KEYS[name]: value.hex() for name, value in asdict(box).items()}


def _box_from_dict(content: Optional[Dict[str, str]]) -> Optional[VertexBox]:
    if content is None:
        return None
    return VertexBox(
        **{name: float.fromhex(content[key]) for name, key in _BOX_KEYS.items()}
    )


def _vertex_pairs(kind: RegionKind, count: int) -> Iterator[Tuple[int, int]]:
    """Yield the indexes of the consecutive edges meeting at each vertex."""
    if kind == RegionKind.POINT:
        yield 0, 1
    elif kind == RegionKind.SEGMENT:
        yield from ((0, 1), (1, 2))
    elif kind == RegionKind.POLYGON:
        yield from (((i - 1) % count, i) for i in range(count))


def snapshot_to_dict(snapshot: RegionSnapshot) -> Dict[str, Any]:
    """Return the kind and the edges of a snapshot as report fields."""
    return {
        "Kind": snapshot.kind.value,
        "Edges": [
            {
                "Octant": entry.octant,
                "N": entry.n.hex(),
                "C": entry.c.hex(),
                "VertexBox": _box_to_dict(entry.vbox),
            }
            for entry in snapshot.entries
        ],
    }


def build_report(region: FeasibleRegion) -> Dict[str, Any]:
    """Return the report of a region."""
    report = snapshot_to_dict(region.snapshot())
    report["Precision"] = region.fmt.bits
    report["Counters"] = {
        key: getattr(region.counters, name) for name, key in _COUNTER_KEYS.items()
    }
    return report


def snapshot_from_report(report: Dict[str, Any]) -> RegionSnapshot:
    """Return the snapshot described by a report.

    Raises:
        ReportError: If the report is invalid.
    """
    # pylint: disable=broad-exception-caught
    try:
        schema.validate_report(report)
        entries = tuple(
            SnapshotEntry(
                edge["Octant"],
                float.fromhex(edge["N"]),
                float.fromhex(edge["C"]),
                _box_from_dict(edge["VertexBox"]),
            )
            for edge in report["Edges"]
        )
        kind = RegionKind(report["Kind"])
    except Exception as err:
        raise ReportError(err) from err
    expected_edges = {
        RegionKind.EMPTY: 0,
        RegionKind.POINT: 2,
        RegionKind.SEGMENT: 4,
    }
    if kind in expected_edges and len(entries) != expected_edges[kind]:
        raise ReportError(
            f"a {kind.value} region must list {expected_edges[kind]} edges"
        )
    if kind == RegionKind.POLYGON and len(entries) < 3:
        raise ReportError("a polygon region must list at least 3 edges")
    for index, entry in enumerate(entries):
        if not (math.isfinite(entry.n) and math.isfinite(entry.c)):
            raise ReportError(f"the edge {index} has an infinite N or C")
    for j, k in _vertex_pairs(kind, len(entries)):
        if exact_homogeneous(entries[j].constraint, entries[k].constraint)[2] == 0:
            raise ReportError(f"the edges {j} and {k} are parallel")
    return RegionSnapshot(kind, entries)


def load_report(filename: str) -> Dict[str, Any]:
    """Read and validate a region report.

    Raises:
        ReportError: If the file is not a valid report.
    """
    # pylint: disable=broad-exception-caught
    LOGGER.debug("Reading the region report %s", filename)
    try:
        with open(filename, "r", encoding="utf-8") as stream:
            report = json.load(stream)
        schema.validate_report(report)
    except Exception as err:
        raise ReportError(err) from err
    return report
