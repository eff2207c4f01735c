"""Exact rational half-plane intersection used as ground truth."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from feasible_region.engine.clip_engine import RegionKind, RegionSnapshot
from feasible_region.engine.constraint_normalizer import RawConstraint
from feasible_region.engine.vertex_bounds import exact_vertex

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

Point = Tuple[Fraction, Fraction]


def _cross(o: Point, p: Point, q: Point) -> Fraction:
    """Cross product of (p - o) and (q - o)."""
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def canonical_vertices(points: Sequence[Point]) -> Tuple[Point, ...]:
    """Return the canonical vertex list of a convex, counter-clockwise point
    sequence: duplicates and collinear points removed, starting at the
    lexicographically smallest vertex. A collinear sequence is reduced to
    its two end points.
    """
    unique: List[Point] = []
    for point in points:
        if not unique or unique[-1] != point:
            unique.append(point)
    while len(unique) > 1 and unique[0] == unique[-1]:
        unique.pop()
    if len(unique) <= 2:
        return tuple(sorted(set(unique)))
    if all(_cross(unique[0], unique[1], p) == 0 for p in unique[2:]):
        return (min(unique), max(unique))
    corners = [
        unique[i]
        for i in range(len(unique))
        if _cross(unique[i - 1], unique[i], unique[(i + 1) % len(unique)]) != 0
    ]
    start = corners.index(min(corners))
    return tuple(corners[start:] + corners[:start])


@dataclass(frozen=True)
class RationalPolygon:
    """Exact convex set given by its canonical vertex list.

    Attributes:
        vertices: Counter-clockwise vertices starting at the lexicographically
            smallest one. Two vertices stand for a segment, one for a point,
            none for the empty set.
    """

    vertices: Tuple[Point, ...]

    @classmethod
    def from_points(cls, points: Iterable[Tuple[int, int]]) -> "RationalPolygon":
        """Build a polygon from counter-clockwise integer or rational points."""
        return cls(
            canonical_vertices([(Fraction(x), Fraction(y)) for x, y in points])
        )

    @property
    def kind(self) -> RegionKind:
        """Shape of the set."""
        count = len(self.vertices)
        if count == 0:
            return RegionKind.EMPTY
        if count == 1:
            return RegionKind.POINT
        if count == 2:
            return RegionKind.SEGMENT
        return RegionKind.POLYGON

    def area(self) -> Fraction:
        """Return the area of the set (shoelace formula)."""
        return polygon_area(self.vertices)

    def contains(self, x: Fraction, y: Fraction) -> bool:
        """Return True if (x, y) belongs to the set."""
        point = (Fraction(x), Fraction(y))
        if self.kind == RegionKind.EMPTY:
            return False
        if self.kind == RegionKind.POINT:
            return point == self.vertices[0]
        if self.kind == RegionKind.SEGMENT:
            first, last = self.vertices
            return _cross(first, last, point) == 0 and first <= point <= last
        count = len(self.vertices)
        return all(
            _cross(self.vertices[i], self.vertices[(i + 1) % count], point) >= 0
            for i in range(count)
        )


def polygon_area(vertices: Sequence[Point]) -> Fraction:
    """Return the area enclosed by counter-clockwise vertices."""
    if len(vertices) < 3:
        return Fraction(0)
    twice = sum(
        (
            x0 * y1 - x1 * y0
            for (x0, y0), (x1, y1) in zip(vertices, list(vertices[1:]) + [vertices[0]])
        ),
        Fraction(0),
    )
    return twice / 2


def _clip(points: List[Point], rc: RawConstraint) -> List[Point]:
    """Clip a convex point sequence by a closed half-plane."""
    if not points:
        return []
    result: List[Point] = []
    s = points[-1]
    s_value = rc.value_at(*s)
    for e in points:
        e_value = rc.value_at(*e)
        if (s_value >= 0) != (e_value >= 0):
            t = s_value / (s_value - e_value)
            result.append((s[0] + t * (e[0] - s[0]), s[1] + t * (e[1] - s[1])))
        if e_value >= 0:
            result.append(e)
        s, s_value = e, e_value
    return list(canonical_vertices(result))


def exact_intersection(
    constraints: Iterable[RawConstraint], box: Tuple[float, float]
) -> RationalPolygon:
    """Return the exact intersection of the box [0, mx] x [0, my] with the
    constraints.
    """
    mx, my = Fraction(box[0]), Fraction(box[1])
    zero = Fraction(0)
    points: List[Point] = [(zero, zero), (mx, zero), (mx, my), (zero, my)]
    for rc in constraints:
        points = _clip(points, rc)
        if not points:
            break
    return RationalPolygon(canonical_vertices(points))


def snapshot_vertices(snapshot: RegionSnapshot) -> List[Point]:
    """Return the exact vertices of the constraints of a snapshot."""
    constraints = [entry.constraint for entry in snapshot.entries]
    if snapshot.kind == RegionKind.EMPTY:
        return []
    if snapshot.kind == RegionKind.POINT:
        return [exact_vertex(constraints[0], constraints[1])]
    if snapshot.kind == RegionKind.SEGMENT:
        start, carrier, end = constraints[:3]
        return [exact_vertex(start, carrier), exact_vertex(carrier, end)]
    return [
        exact_vertex(constraints[i - 1], constraints[i])
        for i in range(len(constraints))
    ]


def snapshot_contains(snapshot: RegionSnapshot, x: Fraction, y: Fraction) -> bool:
    """Return True if (x, y) belongs to the region of a snapshot."""
    if snapshot.kind == RegionKind.EMPTY:
        return False
    if snapshot.kind == RegionKind.POINT:
        return snapshot_vertices(snapshot)[0] == (x, y)
    return all(entry.constraint.value_at(x, y) >= 0 for entry in snapshot.entries)


@dataclass(frozen=True)
class ComparisonResult:
    """Comparison of a clipped region with the exact set.

    Attributes:
        contains_exact: Every exact vertex lies in the clipped region.
        excess_area: Area of the clipped region minus the exact area.
        exact_match: The vertex sets coincide exactly.
        exact_area: Area of the exact set.
    """

    contains_exact: bool
    excess_area: Fraction
    exact_match: bool
    exact_area: Fraction

    @property
    def relative_excess_area(self) -> Optional[Fraction]:
        """Excess area relative to the exact one, None if the latter is 0."""
        if self.exact_area == 0:
            return None
        return self.excess_area / self.exact_area


def compare(snapshot: RegionSnapshot, exact: RationalPolygon) -> ComparisonResult:
    """Compare a region snapshot with the exact set."""
    vertices = canonical_vertices(snapshot_vertices(snapshot))
    contains = all(snapshot_contains(snapshot, x, y) for x, y in exact.vertices)
    area = polygon_area(vertices) if snapshot.kind == RegionKind.POLYGON else 0
    exact_area = exact.area()
    result = ComparisonResult(
        contains_exact=contains,
        excess_area=Fraction(area) - exact_area,
        exact_match=vertices == exact.vertices,
        exact_area=exact_area,
    )
    if not contains:
        LOGGER.debug("Region %s misses exact vertices of %s", snapshot.kind, exact)
    return result
