"""Incremental clipping of a bounded region by linear constraints.

The region starts as the box [0, mx] x [0, my] and every constraint is added
in turn. The stored region always contains the exact feasible set: the only
approximation is the relaxation of each constraint by its normalization, and
all decisions about vertices use exact side tests.

A polygon is clipped in three steps:

1. the vertex A minimizing the constraint and the vertex F maximizing it are
   located by two direction searches;
2. if A is feasible nothing changes, if F is infeasible the region is empty,
   if F is on the line the region becomes a point or a segment;
3. otherwise two binary searches on the chains A->F and F->A find the last
   infeasible vertices, the edges between them are removed and the new edge
   is inserted.
"""

import copy
import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

from feasible_region import config
from feasible_region.engine.constraint_normalizer import (
    OVERFLOW_INFEASIBLE,
    NormalizedConstraint,
    Ordering,
    RawConstraint,
    compare_directions,
    normalize,
    opposite_key,
)
from feasible_region.engine.region_store import Edge, EdgeContainer, RegionStore
from feasible_region.engine.rounding_kernel import BINARY64, FloatFormat
from feasible_region.engine.vertex_bounds import (
    SideResult,
    VertexBox,
    compute_vertex_box,
    exact_vertex,
    side_of_constraint,
)

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

Point = Tuple[Fraction, Fraction]


class BoundViolation(Exception):
    """Exception raised when the start box is not a valid bounded box."""

    def __init__(self, mx: float, my: float, reason: str) -> None:
        self.message = f"Invalid start box ({mx!r}, {my!r}) - {reason}"
        super().__init__(self.message)


class RegionKind(Enum):
    """Shape of the current region."""

    EMPTY = "empty"
    POINT = "point"
    SEGMENT = "segment"
    POLYGON = "polygon"


@dataclass
class ClipCounters:
    """Instrumentation of a region.

    Attributes:
        constraints: Number of constraints added.
        divisions: Number of divisions made by normalizations.
        direction_comparisons: Number of single-scalar comparisons made by
            direction searches.
        side_tests: Number of vertex side tests.
        exact_fallbacks: Number of side tests that needed the exact stage.
    """

    constraints: int = 0
    divisions: int = 0
    direction_comparisons: int = 0
    side_tests: int = 0
    exact_fallbacks: int = 0


@dataclass(frozen=True)
class PointData:
    """Point region: the vertex of two consecutive constraints."""

    first: NormalizedConstraint
    second: NormalizedConstraint
    vbox: VertexBox


@dataclass(frozen=True)
class SegmentData:
    """Segment region lying on the line of `carrier`.

    Attributes:
        carrier: Constraint whose line holds the segment.
        opposite: Constraint with the opposite normal and the same line.
        start: Constraint cutting the carrier at the first end point.
        end: Constraint cutting the carrier at the second end point.
        start_box: Enclosure of the vertex of (start, carrier).
        end_box: Enclosure of the vertex of (carrier, end).
    """

    carrier: NormalizedConstraint
    opposite: NormalizedConstraint
    start: NormalizedConstraint
    end: NormalizedConstraint
    start_box: VertexBox
    end_box: VertexBox


@dataclass(frozen=True)
class SnapshotEntry:
    """Constraint of a snapshot and the enclosure of its first vertex."""

    octant: int
    n: float
    c: float
    vbox: Optional[VertexBox] = None

    @property
    def constraint(self) -> NormalizedConstraint:
        """The entry as a normalized constraint."""
        return NormalizedConstraint(self.octant, self.n, self.c)


@dataclass(frozen=True)
class RegionSnapshot:
    """Deterministic counter-clockwise listing of a region.

    Point regions list their two constraints, the second one carrying the
    box of the point. Segment regions list start, carrier, end and opposite.
    """

    kind: RegionKind
    entries: Tuple[SnapshotEntry, ...]


class FeasibleRegion:
    """Conservative representation of the feasible set of a constraint system.

    Attributes:
        fmt: Binary format of the scalars.
        kind: Current shape of the region.
        store: Edges of a polygon region, None otherwise.
        point: Data of a point region, None otherwise.
        segment: Data of a segment region, None otherwise.
        counters: Instrumentation counters.
    """

    def __init__(self, store: EdgeContainer, fmt: FloatFormat = BINARY64) -> None:
        self.fmt = fmt
        self.kind = RegionKind.POLYGON
        self.store: Optional[EdgeContainer] = store
        self.point: Optional[PointData] = None
        self.segment: Optional[SegmentData] = None
        self.counters = ClipCounters()

    def __repr__(self) -> str:
        return f"FeasibleRegion(kind={self.kind.value}, fmt={self.fmt!r})"

    def _count_division(self) -> None:
        self.counters.divisions += 1

    def _count_fallback(self) -> None:
        self.counters.exact_fallbacks += 1

    def _side(
        self,
        box: VertexBox,
        nc: NormalizedConstraint,
        edge_j: NormalizedConstraint,
        edge_k: NormalizedConstraint,
    ) -> SideResult:
        self.counters.side_tests += 1
        return side_of_constraint(
            box, nc, edge_j, edge_k, self.fmt, count_fallback=self._count_fallback
        )

    # Region transitions

    def _set_empty(self) -> None:
        self.kind = RegionKind.EMPTY
        self.store = None
        self.point = None
        self.segment = None

    def _set_point(self, point: PointData) -> None:
        self.kind = RegionKind.POINT
        self.store = None
        self.point = point
        self.segment = None

    def _set_segment(self, segment: SegmentData) -> None:
        self.kind = RegionKind.SEGMENT
        self.store = None
        self.point = None
        self.segment = segment

    # Clipping

    def add_constraint(self, rc: RawConstraint) -> "FeasibleRegion":
        """Intersect the region with the constraint a*x + b*y >= c.

        Args:
            rc: Constraint to add.

        Returns:
            The region itself, updated in place.

        Raises:
            ZeroNormalError: If a = b = 0.
            ScalarFormatError: If a coefficient is not a scalar of the format.
        """
        nc = normalize(rc, self.fmt, count_division=self._count_division)
        self.counters.constraints += 1
        if nc is OVERFLOW_INFEASIBLE:
            LOGGER.debug("%s overflows, the region becomes empty", rc)
            self._set_empty()
            return self
        assert isinstance(nc, NormalizedConstraint)
        if self.kind == RegionKind.POLYGON:
            self._clip_polygon(nc)
        elif self.kind == RegionKind.SEGMENT:
            self._clip_segment(nc)
        elif self.kind == RegionKind.POINT:
            self._clip_point(nc)
        return self

    def _clip_point(self, nc: NormalizedConstraint) -> None:
        assert self.point is not None
        side = self._side(self.point.vbox, nc, self.point.first, self.point.second)
        if side == SideResult.STRICTLY_INFEASIBLE:
            LOGGER.debug("%s excludes the point, the region becomes empty", nc)
            self._set_empty()

    def _clip_segment(self, nc: NormalizedConstraint) -> None:
        segment = self.segment
        assert segment is not None
        start_side = self._side(segment.start_box, nc, segment.start, segment.carrier)
        end_side = self._side(segment.end_box, nc, segment.carrier, segment.end)
        infeasible = SideResult.STRICTLY_INFEASIBLE
        if start_side != infeasible and end_side != infeasible:
            return
        if start_side == infeasible and end_side == infeasible:
            LOGGER.debug("%s excludes the segment, the region becomes empty", nc)
            self._set_empty()
        elif end_side == SideResult.ON_LINE:
            LOGGER.debug("%s reduces the segment to its second end point", nc)
            self._set_point(PointData(segment.carrier, segment.end, segment.end_box))
        elif start_side == SideResult.ON_LINE:
            LOGGER.debug("%s reduces the segment to its first end point", nc)
            self._set_point(
                PointData(segment.start, segment.carrier, segment.start_box)
            )
        elif end_side == infeasible:
            LOGGER.debug("%s cuts the second end of the segment", nc)
            box = compute_vertex_box(segment.carrier, nc, self.fmt)
            self.segment = SegmentData(
                segment.carrier,
                segment.opposite,
                segment.start,
                nc,
                segment.start_box,
                box,
            )
        else:
            LOGGER.debug("%s cuts the first end of the segment", nc)
            box = compute_vertex_box(nc, segment.carrier, self.fmt)
            self.segment = SegmentData(
                segment.carrier,
                segment.opposite,
                nc,
                segment.end,
                box,
                segment.end_box,
            )

    def _vertex_side(self, rank: int, nc: NormalizedConstraint) -> SideResult:
        """Side of the first vertex of the edge of a given rank."""
        store = self.store
        assert store is not None
        pos = store.position_at(rank)
        previous = store.previous_position(pos)
        edge = store.edge_at(pos)
        assert edge.vbox is not None
        return self._side(
            edge.vbox, nc, store.constraint_at(previous), store.constraint_at(pos)
        )

    def _clip_polygon(self, nc: NormalizedConstraint) -> None:
        store = self.store
        assert store is not None
        comparisons = store.comparisons
        try:
            self._cut_polygon(store, nc)
        finally:
            self.counters.direction_comparisons += store.comparisons - comparisons

    def _cut_polygon(self, store: EdgeContainer, nc: NormalizedConstraint) -> None:
        size = store.size()
        rank_a = store.rank_of(store.locate_direction(nc.key))
        if self._vertex_side(rank_a, nc) != SideResult.STRICTLY_INFEASIBLE:
            LOGGER.debug("%s is redundant, the region is unchanged", nc)
            return

        pos_f = store.locate_direction(opposite_key(nc.key))
        rank_f = store.rank_of(pos_f)
        side_f = self._vertex_side(rank_f, nc)
        if side_f == SideResult.STRICTLY_INFEASIBLE:
            LOGGER.debug("%s excludes all vertices, the region becomes empty", nc)
            self._set_empty()
            return
        if side_f == SideResult.ON_LINE:
            self._downgrade(store, pos_f, nc)
            return

        sides: Dict[int, SideResult] = {rank_a % size: SideResult.STRICTLY_INFEASIBLE}
        sides[rank_f % size] = side_f

        def side_at(rank: int) -> SideResult:
            rank %= size
            if rank not in sides:
                sides[rank] = self._vertex_side(rank, nc)
            return sides[rank]

        # Last infeasible vertex on the chain A -> F
        low, high = 0, (rank_f - rank_a) % size
        while high - low > 1:
            middle = (low + high) // 2
            if side_at(rank_a + middle) == SideResult.STRICTLY_INFEASIBLE:
                low = middle
            else:
                high = middle
        last = rank_a + low

        # First infeasible vertex on the chain F -> A
        low, high = 0, (rank_a - rank_f) % size
        while high - low > 1:
            middle = (low + high) // 2
            if side_at(rank_f + middle) == SideResult.STRICTLY_INFEASIBLE:
                high = middle
            else:
                low = middle
        first = rank_f + high

        # Edges ending on the line keep a single point and are dropped too
        from_rank = first - 1 if side_at(first - 1) == SideResult.ON_LINE else first
        to_rank = last + 1 if side_at(last + 1) == SideResult.ON_LINE else last
        if (to_rank - from_rank) % size:
            store.remove_edges(store.position_at(from_rank), store.position_at(to_rank))
        LOGGER.debug(
            "%s removes %d edges and leaves %d",
            nc,
            (to_rank - from_rank) % size,
            store.size(),
        )
        self._insert(store, nc)

    def _insert(self, store: EdgeContainer, nc: NormalizedConstraint) -> None:
        at = store.octant_insertion_point(nc.key)
        pos = store.insert_edge(nc.octant, at, Edge(nc.n, nc.c))
        previous = store.constraint_at(store.previous_position(pos))
        store.set_edge(
            pos, Edge(nc.n, nc.c, compute_vertex_box(previous, nc, self.fmt))
        )
        following_pos = store.next_position(pos)
        following = store.constraint_at(following_pos)
        store.set_edge(
            following_pos,
            Edge(following.n, following.c, compute_vertex_box(nc, following, self.fmt)),
        )

    def _downgrade(
        self, store: EdgeContainer, pos_f: int, nc: NormalizedConstraint
    ) -> None:
        """Reduce the polygon to the set where the constraint is tight."""
        at_f = store.constraint_at(pos_f)
        previous = store.constraint_at(store.previous_position(pos_f))
        edge_f = store.edge_at(pos_f)
        assert edge_f.vbox is not None
        if compare_directions(at_f.key, opposite_key(nc.key)) == Ordering.EQUAL:
            following_pos = store.next_position(pos_f)
            following = store.edge_at(following_pos)
            assert following.vbox is not None
            LOGGER.debug("%s leaves a segment of the region", nc)
            self._set_segment(
                SegmentData(
                    carrier=at_f,
                    opposite=nc,
                    start=previous,
                    end=store.constraint_at(following_pos),
                    start_box=edge_f.vbox,
                    end_box=following.vbox,
                )
            )
        else:
            LOGGER.debug("%s leaves a single vertex of the region", nc)
            self._set_point(PointData(previous, at_f, edge_f.vbox))

    # Queries

    def constraints(self) -> List[NormalizedConstraint]:
        """Return the stored constraints, counter-clockwise."""
        return [entry.constraint for entry in self.snapshot().entries]

    def contains_point(self, x: Fraction, y: Fraction) -> bool:
        """Return True if (x, y) lies in the region, evaluated exactly."""
        if self.kind == RegionKind.EMPTY:
            return False
        if self.kind == RegionKind.POINT:
            assert self.point is not None
            return exact_vertex(self.point.first, self.point.second) == (x, y)
        return all(nc.value_at(x, y) >= 0 for nc in self.constraints())

    def exact_vertices(self) -> List[Point]:
        """Return the exact vertices of the stored constraints,
        counter-clockwise.
        """
        if self.kind == RegionKind.EMPTY:
            return []
        if self.kind == RegionKind.POINT:
            assert self.point is not None
            return [exact_vertex(self.point.first, self.point.second)]
        if self.kind == RegionKind.SEGMENT:
            assert self.segment is not None
            return [
                exact_vertex(self.segment.start, self.segment.carrier),
                exact_vertex(self.segment.carrier, self.segment.end),
            ]
        constraints = self.constraints()
        return [
            exact_vertex(constraints[i - 1], constraints[i])
            for i in range(len(constraints))
        ]

    def snapshot(self) -> RegionSnapshot:
        """Return the counter-clockwise listing of the region."""
        entries: List[SnapshotEntry] = []
        if self.kind == RegionKind.POLYGON:
            assert self.store is not None
            for _, octant, edge in self.store.edges():
                entries.append(SnapshotEntry(octant, edge.n, edge.c, edge.vbox))
        elif self.kind == RegionKind.POINT:
            assert self.point is not None
            first, second = self.point.first, self.point.second
            entries.append(SnapshotEntry(first.octant, first.n, first.c))
            entries.append(
                SnapshotEntry(second.octant, second.n, second.c, self.point.vbox)
            )
        elif self.kind == RegionKind.SEGMENT:
            segment = self.segment
            assert segment is not None
            for nc, box in (
                (segment.start, None),
                (segment.carrier, segment.start_box),
                (segment.end, segment.end_box),
                (segment.opposite, None),
            ):
                entries.append(SnapshotEntry(nc.octant, nc.n, nc.c, box))
        return RegionSnapshot(self.kind, tuple(entries))

    def check_invariants(self) -> Optional[str]:
        """Return the first violated invariant of the region, or None."""
        if self.kind != RegionKind.POLYGON:
            return None
        assert self.store is not None
        if self.store.size() < 3:
            return "polygon with less than 3 edges"
        return self.store.check_invariants()

    def copy(self) -> "FeasibleRegion":
        """Return an independent copy of the region."""
        return copy.deepcopy(self)


def new_box(
    mx: float,
    my: float,
    fmt: FloatFormat = BINARY64,
    capacity: int = config.INITIAL_STORE_CAPACITY,
) -> FeasibleRegion:
    """Return the region [0, mx] x [0, my].

    Raises:
        BoundViolation: Unless mx > 0 and my > 0 are scalars of the format
            with mx + my below the largest finite value.
    """
    for value in (mx, my):
        if not fmt.is_representable(value):
            raise BoundViolation(
                mx, my, f"the sides must be finite {fmt.bits}-bit values"
            )
        if value <= 0:
            raise BoundViolation(mx, my, "the sides must be positive")
    if Fraction(mx) + Fraction(my) >= Fraction(fmt.largest):
        raise BoundViolation(mx, my, "mx + my must be below the largest finite value")

    sides = [
        NormalizedConstraint(0, 0.0, 0.0),
        NormalizedConstraint(2, 0.0, 0.0),
        NormalizedConstraint(4, 0.0, -float(mx)),
        NormalizedConstraint(6, 0.0, -float(my)),
    ]
    store = RegionStore(capacity)
    for index, nc in enumerate(sides):
        box = compute_vertex_box(sides[index - 1], nc, fmt)
        store.insert_edge(nc.octant, None, Edge(nc.n, nc.c, box))
    LOGGER.debug("Created the box [0, %r] x [0, %r]", mx, my)
    return FeasibleRegion(store, fmt)


def clip_all(
    region: FeasibleRegion,
    constraints: List[RawConstraint],
    on_step: Optional[Callable[[FeasibleRegion], None]] = None,
) -> FeasibleRegion:
    """Add constraints in order, calling `on_step` after each one."""
    for rc in constraints:
        region.add_constraint(rc)
        if on_step:
            on_step(region)
    return region
