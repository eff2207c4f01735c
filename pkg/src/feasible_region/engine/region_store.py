"""Storage of the edges of a convex region.

Edges live in one shared array with slack and are grouped into eight octant
ranges. Active ranges and a sentinel form a doubly linked circular list in
octant order. The sentinel always frames the whole array: its `begin` is the
first slot and its `end` is one past the last slot.

Positions are array indices. They are only valid until the next mutation.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterator, List, Optional, Protocol, Tuple

from feasible_region import config
from feasible_region.engine.constraint_normalizer import (
    DirectionKey,
    NormalizedConstraint,
    Ordering,
    compare_directions,
)
from feasible_region.engine.vertex_bounds import VertexBox

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())


class StoreError(Exception):
    """Exception raised when the store is used outside of its contract."""


class StoreInvariantError(Exception):
    """Exception raised when a store invariant is violated."""

    def __init__(self, violation: str) -> None:
        self.message = f"Region store is inconsistent - {violation}"
        super().__init__(self.message)


@dataclass(frozen=True)
class Edge:
    """Edge of the region. The octant is given by the range holding it.

    Attributes:
        n: Secondary magnitude of the normalized normal.
        c: Relaxed right-hand side.
        vbox: Enclosure of the first vertex of the edge, i.e. its
            intersection with the previous edge.
    """

    n: float
    c: float
    vbox: Optional[VertexBox] = None


@dataclass
class OctantRange:
    """Slice [begin, end) of the edge array holding the edges of an octant.

    All four fields are None when the range is inactive. The sentinel has
    octant -1.
    """

    octant: int
    begin: Optional[int] = None
    end: Optional[int] = None
    previous: Optional["OctantRange"] = field(default=None, repr=False, compare=False)
    next: Optional["OctantRange"] = field(default=None, repr=False, compare=False)

    @property
    def active(self) -> bool:
        """True if the range holds edges."""
        return self.begin is not None


class EdgeContainer(Protocol):
    """Operations the clip engine needs from an edge container."""

    comparisons: int

    def size(self) -> int:
        """Number of edges."""

    def locate_direction(self, key: DirectionKey) -> int:
        """Position of the first edge whose direction is not before `key`."""

    def octant_insertion_point(self, key: DirectionKey) -> Optional[int]:
        """Position at which an edge with direction `key` is inserted."""

    def insert_edge(self, octant: int, at: Optional[int], edge: Edge) -> int:
        """Insert an edge and return its position."""

    def remove_edges(self, from_pos: int, to_pos: int) -> None:
        """Remove the circular span of edges [from_pos, to_pos)."""

    def next_position(self, pos: int) -> int:
        """Position of the next edge, counter-clockwise."""

    def previous_position(self, pos: int) -> int:
        """Position of the previous edge, counter-clockwise."""

    def position_at(self, rank: int) -> int:
        """Position of the edge of a given counter-clockwise rank."""

    def rank_of(self, pos: int) -> int:
        """Counter-clockwise rank of the edge at a position."""

    def constraint_at(self, pos: int) -> NormalizedConstraint:
        """Normalized constraint of the edge at a position."""

    def edge_at(self, pos: int) -> Edge:
        """Edge at a position."""

    def set_edge(self, pos: int, edge: Edge) -> None:
        """Replace the edge at a position."""

    def edges(self) -> Iterator[Tuple[int, int, Edge]]:
        """Position, octant and edge of every edge, counter-clockwise."""

    def check_invariants(self) -> Optional[str]:
        """First violated invariant, or None."""


class RegionStore:
    """Array-backed edge container.

    Attributes:
        ranges: The eight octant ranges, active or not.
        sentinel: Node closing the circular list of active ranges.
        comparisons: Number of single-scalar direction comparisons made by
            searches since the store was created.
    """

    ranges: List[OctantRange]
    sentinel: OctantRange
    comparisons: int

    def __init__(self, capacity: int = config.INITIAL_STORE_CAPACITY) -> None:
        if capacity < 1:
            raise StoreError("The initial capacity must be positive")
        self._edges: List[Optional[Edge]] = [None] * capacity
        self._size = 0
        self.ranges = [OctantRange(octant) for octant in range(8)]
        self.sentinel = OctantRange(-1, 0, capacity)
        self.sentinel.previous = self.sentinel
        self.sentinel.next = self.sentinel
        self.comparisons = 0

    # Read access

    @property
    def capacity(self) -> int:
        """Number of slots of the edge array."""
        return len(self._edges)

    def size(self) -> int:
        return self._size

    def active_ranges(self) -> Iterator[OctantRange]:
        """Iterate over the active ranges in octant order."""
        node = self.sentinel.next
        while node is not self.sentinel:
            assert node is not None
            yield node
            node = node.next

    def _range_of(self, pos: int) -> OctantRange:
        for octant_range in self.active_ranges():
            assert octant_range.begin is not None and octant_range.end is not None
            if octant_range.begin <= pos < octant_range.end:
                return octant_range
        raise StoreError(f"Position {pos} does not hold an edge")

    def octant_of(self, pos: int) -> int:
        """Return the octant of the edge at a position."""
        return self._range_of(pos).octant

    def edge_at(self, pos: int) -> Edge:
        edge = self._edges[pos] if 0 <= pos < self.capacity else None
        if edge is None:
            raise StoreError(f"Position {pos} does not hold an edge")
        return edge

    def key_at(self, pos: int) -> DirectionKey:
        """Return the direction of the edge at a position."""
        return DirectionKey(self.octant_of(pos), self.edge_at(pos).n)

    def constraint_at(self, pos: int) -> NormalizedConstraint:
        edge = self.edge_at(pos)
        return NormalizedConstraint(self.octant_of(pos), edge.n, edge.c)

    def first_position(self) -> int:
        """Return the position of the first edge in counter-clockwise order."""
        if self._size == 0:
            raise StoreError("The store is empty")
        first = self.sentinel.next
        assert first is not None and first.begin is not None
        return first.begin

    def next_position(self, pos: int) -> int:
        """Return the position of the edge following `pos`, circularly."""
        octant_range = self._range_of(pos)
        assert octant_range.end is not None
        if pos + 1 < octant_range.end:
            return pos + 1
        following = octant_range.next
        if following is self.sentinel:
            following = self.sentinel.next
        assert following is not None and following.begin is not None
        return following.begin

    def previous_position(self, pos: int) -> int:
        """Return the position of the edge preceding `pos`, circularly."""
        octant_range = self._range_of(pos)
        assert octant_range.begin is not None
        if pos > octant_range.begin:
            return pos - 1
        preceding = octant_range.previous
        if preceding is self.sentinel:
            preceding = self.sentinel.previous
        assert preceding is not None and preceding.end is not None
        return preceding.end - 1

    def rank_of(self, pos: int) -> int:
        rank = 0
        for octant_range in self.active_ranges():
            assert octant_range.begin is not None and octant_range.end is not None
            if octant_range.begin <= pos < octant_range.end:
                return rank + pos - octant_range.begin
            rank += octant_range.end - octant_range.begin
        raise StoreError(f"Position {pos} does not hold an edge")

    def position_at(self, rank: int) -> int:
        if self._size == 0:
            raise StoreError("The store is empty")
        rank %= self._size
        for octant_range in self.active_ranges():
            assert octant_range.begin is not None and octant_range.end is not None
            length = octant_range.end - octant_range.begin
            if rank < length:
                return octant_range.begin + rank
            rank -= length
        raise StoreError("Inconsistent edge count")

    def edges(self) -> Iterator[Tuple[int, int, Edge]]:
        """Iterate over (position, octant, edge) in counter-clockwise order."""
        for octant_range in self.active_ranges():
            assert octant_range.begin is not None and octant_range.end is not None
            for pos in range(octant_range.begin, octant_range.end):
                yield pos, octant_range.octant, self.edge_at(pos)

    # Searches

    def _lower_bound(self, octant_range: OctantRange, key: DirectionKey) -> int:
        """First position of an active range whose direction is not before
        `key`, or its end.
        """
        assert octant_range.begin is not None and octant_range.end is not None
        low, high = octant_range.begin, octant_range.end
        while low < high:
            middle = (low + high) // 2
            self.comparisons += 1
            current = DirectionKey(octant_range.octant, self.edge_at(middle).n)
            if compare_directions(current, key) == Ordering.BEFORE:
                low = middle + 1
            else:
                high = middle
        return low

    def locate_direction(self, key: DirectionKey) -> int:
        """Return the position of the first edge whose direction is not before
        `key`, wrapping to the first edge.

        Raises:
            StoreError: If the store is empty.
        """
        if self._size == 0:
            raise StoreError("Cannot locate a direction in an empty store")
        for octant_range in self.active_ranges():
            if octant_range.octant == key.octant:
                pos = self._lower_bound(octant_range, key)
                if pos < (octant_range.end or 0):
                    return pos
            elif octant_range.octant > key.octant:
                assert octant_range.begin is not None
                return octant_range.begin
        return self.first_position()

    def octant_insertion_point(self, key: DirectionKey) -> Optional[int]:
        """Return the insertion position of `key` within its octant range, or
        None if the range is inactive.
        """
        octant_range = self.ranges[key.octant]
        if not octant_range.active:
            return None
        return self._lower_bound(octant_range, key)

    # Mutations

    def _lower_limit(self, octant_range: OctantRange) -> int:
        preceding = octant_range.previous
        if preceding is self.sentinel or preceding is None:
            return 0
        assert preceding.end is not None
        return preceding.end

    def _upper_limit(self, octant_range: OctantRange) -> int:
        following = octant_range.next
        if following is self.sentinel or following is None:
            return self.capacity
        assert following.begin is not None
        return following.begin

    def _shift(self, octant_range: OctantRange, offset: int) -> None:
        """Move all edges of an active range by one slot."""
        assert octant_range.begin is not None and octant_range.end is not None
        begin, end = octant_range.begin, octant_range.end
        if offset < 0:
            for pos in range(begin, end):
                self._edges[pos - 1] = self._edges[pos]
            self._edges[end - 1] = None
        else:
            for pos in range(end, begin, -1):
                self._edges[pos] = self._edges[pos - 1]
            self._edges[begin] = None
        octant_range.begin = begin + offset
        octant_range.end = end + offset

    def _bump_lower(self, octant_range: OctantRange) -> bool:
        """Move the preceding range down by one slot if it has slack below."""
        preceding = octant_range.previous
        if preceding is None or preceding is self.sentinel:
            return False
        assert preceding.begin is not None
        if preceding.begin <= self._lower_limit(preceding):
            return False
        self._shift(preceding, -1)
        return True

    def _bump_upper(self, octant_range: OctantRange) -> bool:
        """Move the following range up by one slot if it has slack above."""
        following = octant_range.next
        if following is None or following is self.sentinel:
            return False
        assert following.end is not None
        if following.end >= self._upper_limit(following):
            return False
        self._shift(following, 1)
        return True

    def _repack(self, priority_gap: int) -> None:
        """Spread the slack evenly between the active ranges, doubling the
        array first when it is full.

        Args:
            priority_gap: Index of the gap that must get at least one slot,
                gap i lying just before the i-th active range.
        """
        capacity = self.capacity
        if self._size >= capacity:
            capacity *= 2
            LOGGER.debug("Growing the edge array to %d slots", capacity)
        active = list(self.active_ranges())
        contents = []
        for octant_range in active:
            assert octant_range.begin is not None and octant_range.end is not None
            contents.append(self._edges[octant_range.begin : octant_range.end])
        free = capacity - self._size
        gaps = len(active) + 1
        shares = [free // gaps + (1 if i < free % gaps else 0) for i in range(gaps)]
        if shares[priority_gap] == 0:
            donor = next(i for i, share in enumerate(shares) if share > 0)
            shares[donor] -= 1
            shares[priority_gap] += 1

        self._edges = [None] * capacity
        pos = 0
        for index, octant_range in enumerate(active):
            pos += shares[index]
            length = len(contents[index])
            self._edges[pos : pos + length] = contents[index]
            octant_range.begin = pos
            octant_range.end = pos + length
            pos += length
        self.sentinel.end = capacity

    def _gap_index(self, octant: int) -> int:
        """Index of the gap in which a range of this octant lies."""
        return sum(1 for r in self.active_ranges() if r.octant < octant)

    def _activate(self, octant_range: OctantRange, edge: Edge) -> int:
        preceding = self.sentinel
        for candidate in self.active_ranges():
            if candidate.octant < octant_range.octant:
                preceding = candidate
        following = preceding.next
        assert following is not None

        # Link first so the limits of the new range can be computed
        octant_range.previous = preceding
        octant_range.next = following
        low = self._lower_limit(octant_range)
        high = self._upper_limit(octant_range)
        if high <= low:
            if not (self._bump_lower(octant_range) or self._bump_upper(octant_range)):
                self._repack(self._gap_index(octant_range.octant))
            low = self._lower_limit(octant_range)
            high = self._upper_limit(octant_range)

        pos = low + (high - low) // 2
        self._edges[pos] = edge
        octant_range.begin = pos
        octant_range.end = pos + 1
        preceding.next = octant_range
        following.previous = octant_range
        self._size += 1
        LOGGER.debug("Activated octant %d at slot %d", octant_range.octant, pos)
        return pos

    def insert_edge(self, octant: int, at: Optional[int], edge: Edge) -> int:
        """Insert an edge into an octant range.

        Args:
            octant: Octant of the edge.
            at: Insertion position within the range, as returned by
                `octant_insertion_point`. Ignored when the range is inactive.
            edge: Edge to insert.

        Returns:
            Position of the inserted edge.

        Raises:
            StoreError: If `at` is outside of the active range.
        """
        octant_range = self.ranges[octant]
        if not octant_range.active:
            return self._activate(octant_range, edge)
        assert octant_range.begin is not None and octant_range.end is not None
        if at is None or not octant_range.begin <= at <= octant_range.end:
            raise StoreError(f"Invalid insertion position {at} in octant {octant}")
        offset = at - octant_range.begin

        if not (
            octant_range.end < self._upper_limit(octant_range)
            or octant_range.begin > self._lower_limit(octant_range)
        ):
            if not (self._bump_lower(octant_range) or self._bump_upper(octant_range)):
                self._repack(self._gap_index(octant) + 1)
        assert octant_range.begin is not None and octant_range.end is not None
        at = octant_range.begin + offset

        if octant_range.end < self._upper_limit(octant_range):
            for pos in range(octant_range.end, at, -1):
                self._edges[pos] = self._edges[pos - 1]
            self._edges[at] = edge
            octant_range.end += 1
        else:
            for pos in range(octant_range.begin - 1, at - 1):
                self._edges[pos] = self._edges[pos + 1]
            at -= 1
            self._edges[at] = edge
            octant_range.begin -= 1
        self._size += 1
        return at

    def set_edge(self, pos: int, edge: Edge) -> None:
        self.edge_at(pos)
        self._edges[pos] = edge

    def _deactivate(self, octant_range: OctantRange) -> None:
        preceding, following = octant_range.previous, octant_range.next
        assert preceding is not None and following is not None
        preceding.next = following
        following.previous = preceding
        octant_range.begin = octant_range.end = None
        octant_range.previous = octant_range.next = None
        LOGGER.debug("Deactivated octant %d", octant_range.octant)

    def _remove_slice(self, octant_range: OctantRange, start: int, stop: int) -> None:
        assert octant_range.begin is not None and octant_range.end is not None
        count = stop - start
        if start == octant_range.begin:
            self._edges[start:stop] = [None] * count
            octant_range.begin = stop
        elif stop == octant_range.end:
            self._edges[start:stop] = [None] * count
            octant_range.end = start
        else:
            end = octant_range.end
            for pos in range(stop, end):
                self._edges[pos - count] = self._edges[pos]
            self._edges[end - count : end] = [None] * count
            octant_range.end = end - count
        self._size -= count

    def remove_edges(self, from_pos: int, to_pos: int) -> None:
        """Remove the edges from `from_pos` included to `to_pos` excluded,
        walking counter-clockwise.

        Raises:
            StoreError: If the span is empty.
        """
        count = (self.rank_of(to_pos) - self.rank_of(from_pos)) % self._size
        if count == 0:
            raise StoreError("Cannot remove an empty span of edges")
        pieces = []
        octant_range = self._range_of(from_pos)
        start = from_pos
        remaining = count
        while remaining > 0:
            assert octant_range.end is not None
            take = min(remaining, octant_range.end - start)
            pieces.append((octant_range, start, start + take))
            remaining -= take
            following = octant_range.next
            if following is self.sentinel:
                following = self.sentinel.next
            assert following is not None and following.begin is not None
            octant_range, start = following, following.begin
        for piece_range, piece_start, piece_stop in pieces:
            self._remove_slice(piece_range, piece_start, piece_stop)
        for piece_range, _, _ in pieces:
            if piece_range.active and piece_range.begin == piece_range.end:
                self._deactivate(piece_range)

    # Invariants

    def check_invariants(self) -> Optional[str]:
        """Return the first violated invariant, or None."""
        # pylint: disable=too-many-return-statements
        if self.sentinel.begin != 0 or self.sentinel.end != self.capacity:
            return "sentinel does not frame the edge array"
        for octant_range in self.ranges:
            fields = (
                octant_range.begin,
                octant_range.end,
                octant_range.previous,
                octant_range.next,
            )
            if any(value is None for value in fields) and not all(
                value is None for value in fields
            ):
                return f"octant {octant_range.octant} is partially cleared"
            if octant_range.begin is not None and not (
                0 <= octant_range.begin < octant_range.end <= self.capacity
            ):
                return f"octant {octant_range.octant} has an invalid slice"

        visited = []
        previous, node = self.sentinel, self.sentinel.next
        while node is not self.sentinel:
            if node is None or node.previous is not previous or len(visited) >= 8:
                return "circular list broken"
            visited.append(node)
            previous, node = node, node.next
        if self.sentinel.previous is not previous:
            return "circular list broken"
        active = [r for r in self.ranges if r.active]
        if len(visited) != len(active):
            return "circular list broken"
        if any(left is not right for left, right in zip(visited, active)):
            return "active ranges out of octant order"

        occupied = [False] * self.capacity
        previous_end = 0
        total = 0
        for octant_range in visited:
            assert octant_range.begin is not None and octant_range.end is not None
            if octant_range.begin < previous_end:
                return "octant slices overlap"
            previous_end = octant_range.end
            total += octant_range.end - octant_range.begin
            for pos in range(octant_range.begin, octant_range.end):
                occupied[pos] = True
        for pos, edge in enumerate(self._edges):
            if occupied[pos] and edge is None:
                return f"empty slot {pos} inside an octant slice"
            if not occupied[pos] and edge is not None:
                return f"slack slot {pos} is occupied"
        if total != self._size:
            return "edge count mismatch"

        for octant_range in visited:
            assert octant_range.begin is not None and octant_range.end is not None
            even = octant_range.octant % 2 == 0
            keys = []
            for pos in range(octant_range.begin, octant_range.end):
                n = self.edge_at(pos).n
                if not (0 <= n < 1 if even else 0 < n <= 1):
                    return (
                        f"edge coefficient {n!r} out of range"
                        f" in octant {octant_range.octant}"
                    )
                keys.append(DirectionKey(octant_range.octant, n))
            for left, right in zip(keys, keys[1:]):
                if compare_directions(left, right) != Ordering.BEFORE:
                    return "octant slice unsorted"
        return None

    def assert_invariants(self) -> None:
        """Raise StoreInvariantError if an invariant is violated."""
        violation = self.check_invariants()
        if violation:
            raise StoreInvariantError(violation)
