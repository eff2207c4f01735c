"""Test the module `feasible_region.engine.clip_engine`."""

# COMPLETED
import math
import random
import unittest
from collections import Counter
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from feasible_region import config
from feasible_region.engine import clip_engine as ce
from feasible_region.engine.constraint_normalizer import (
    RawConstraint,
    ZeroNormalError,
)
from feasible_region.engine.region_store import RegionStore
from feasible_region.engine.rounding_kernel import (
    BINARY32,
    BINARY64,
    LARGEST_FINITE,
    ScalarFormatError,
)
from feasible_region.verification import oracle, testgen


def vertices(region):
    """Return the canonical exact vertices of a region."""
    return oracle.canonical_vertices(region.exact_vertices())


def points(*coordinates):
    """Return canonical vertices from integer coordinates."""
    return oracle.RationalPolygon.from_points(coordinates).vertices


class TestNewBox(unittest.TestCase):
    """Test the function `new_box`."""

    def test_square(self):
        """Check the edges and vertices of the start box."""
        region = ce.new_box(10.0, 20.0)
        self.assertEqual(region.kind, ce.RegionKind.POLYGON)
        self.assertIsNone(region.check_invariants())
        self.assertEqual(vertices(region), points((0, 0), (10, 0), (10, 20), (0, 20)))
        snapshot = region.snapshot()
        self.assertEqual([entry.octant for entry in snapshot.entries], [0, 2, 4, 6])
        self.assertEqual([entry.c for entry in snapshot.entries], [0, 0, -10, -20])
        self.assertTrue(all(entry.vbox is not None for entry in snapshot.entries))

    def test_invalid_boxes(self):
        """Check that a BoundViolation exception is raised for invalid sides."""
        for mx, my in (
            (0.0, 1.0),
            (1.0, -1.0),
            (math.inf, 1.0),
            (math.nan, 1.0),
            (LARGEST_FINITE, LARGEST_FINITE),
        ):
            with self.assertRaises(ce.BoundViolation, msg=(mx, my)):
                ce.new_box(mx, my)
        with self.assertRaises(ce.BoundViolation):
            ce.new_box(0.1, 1.0, BINARY32)

    def test_largest_valid_box(self):
        """Check that a box whose sides sum just below the largest value is
        accepted.
        """
        side = LARGEST_FINITE / 4
        region = ce.new_box(side, side)
        self.assertIsNone(region.check_invariants())


class TestAddConstraint(unittest.TestCase):
    """Test the method `add_constraint` on the square [0, 10] x [0, 10]."""

    def setUp(self):
        """Create the square."""
        self.region = ce.new_box(10.0, 10.0)

    def add(self, a, b, c):
        """Add the constraint a*x + b*y >= c."""
        return self.region.add_constraint(RawConstraint(float(a), float(b), float(c)))

    def test_pentagon(self):
        """Check that a diagonal cut gives a pentagon."""
        self.add(1, 1, 5)
        self.assertEqual(self.region.kind, ce.RegionKind.POLYGON)
        self.assertEqual(
            vertices(self.region),
            points((5, 0), (10, 0), (10, 10), (0, 10), (0, 5)),
        )
        self.assertIsNone(self.region.check_invariants())
        self.assertEqual(self.region.counters.constraints, 1)
        self.assertEqual(self.region.counters.divisions, 2)

    def test_point(self):
        """Check that a constraint touching a single vertex gives a point."""
        self.add(1, 1, 20)
        self.assertEqual(self.region.kind, ce.RegionKind.POINT)
        self.assertEqual(self.region.exact_vertices(), [(10, 10)])
        self.assertTrue(self.region.contains_point(Fraction(10), Fraction(10)))
        self.assertFalse(self.region.contains_point(Fraction(9), Fraction(10)))
        self.assertEqual(len(self.region.snapshot().entries), 2)

    def test_empty(self):
        """Check that a constraint excluding every vertex gives the empty set."""
        self.add(1, 1, 20.000001)
        self.assertEqual(self.region.kind, ce.RegionKind.EMPTY)
        self.assertEqual(self.region.exact_vertices(), [])
        self.assertEqual(self.region.snapshot().entries, ())
        self.assertFalse(self.region.contains_point(Fraction(0), Fraction(0)))

    def test_segment(self):
        """Check that a constraint tight along an edge gives a segment."""
        self.add(1, 0, 10)
        self.assertEqual(self.region.kind, ce.RegionKind.SEGMENT)
        self.assertEqual(vertices(self.region), points((10, 0), (10, 10)))
        self.assertEqual(len(self.region.snapshot().entries), 4)

    def test_redundant(self):
        """Check that redundant and tangent constraints leave the region
        unchanged.
        """
        before = self.region.snapshot()
        self.add(1, 1, 0)
        self.add(1, 0, 0)
        self.add(-1, -1, -20)
        self.assertEqual(self.region.snapshot(), before)

    def test_chain(self):
        """Check that a region shrinks from polygon to segment, point and
        empty set.
        """
        self.add(1, 0, 10)
        self.add(0, 1, 3)
        self.assertEqual(self.region.kind, ce.RegionKind.SEGMENT)
        self.assertEqual(vertices(self.region), points((10, 3), (10, 10)))
        self.add(0, -1, -7)
        self.assertEqual(vertices(self.region), points((10, 3), (10, 7)))
        self.add(0, -1, -3)
        self.assertEqual(self.region.kind, ce.RegionKind.POINT)
        self.assertEqual(self.region.exact_vertices(), [(10, 3)])
        self.add(1, 1, 13)
        self.assertEqual(self.region.kind, ce.RegionKind.POINT)
        self.add(0, 1, 4)
        self.assertEqual(self.region.kind, ce.RegionKind.EMPTY)
        # The empty set stays empty
        self.add(1, 0, -100)
        self.assertEqual(self.region.kind, ce.RegionKind.EMPTY)

    def test_segment_removed(self):
        """Check that a constraint excluding both ends empties a segment."""
        self.add(-1, 0, 0)
        self.assertEqual(vertices(self.region), points((0, 0), (0, 10)))
        self.add(1, 0, 1)
        self.assertEqual(self.region.kind, ce.RegionKind.EMPTY)

    def test_octagon(self):
        """Check that cutting the four corners gives an octagon."""
        for a, b, c in ((1, 1, 3), (-1, 1, -7), (-1, -1, -17), (1, -1, -7)):
            self.add(a, b, c)
        self.assertEqual(
            vertices(self.region),
            points((3, 0), (7, 0), (10, 3), (10, 7), (7, 10), (3, 10), (0, 7), (0, 3)),
        )
        self.assertIsNone(self.region.check_invariants())

    def test_cut_through_vertices(self):
        """Check cuts whose lines pass through vertices."""
        self.add(1, -1, -10)
        self.assertEqual(len(self.region.snapshot().entries), 4)
        self.add(1, -1, 0)
        self.add(-1, 1, 0)
        self.assertEqual(self.region.kind, ce.RegionKind.SEGMENT)
        self.assertEqual(vertices(self.region), points((0, 0), (10, 10)))

    def test_triangle(self):
        """Check a cut through two opposite corners keeping a triangle."""
        self.add(1, -1, 0)
        self.assertEqual(vertices(self.region), points((0, 0), (10, 0), (10, 10)))
        self.assertEqual(len(self.region.snapshot().entries), 3)

    def test_inexact_constraint(self):
        """Check that a normalized constraint contains the exact half-plane."""
        self.add(3, 1, 10)
        exact = oracle.exact_intersection([RawConstraint(3.0, 1.0, 10.0)], (10, 10))
        comparison = oracle.compare(self.region.snapshot(), exact)
        self.assertTrue(comparison.contains_exact)
        self.assertGreaterEqual(comparison.excess_area, 0)

    def test_overflow(self):
        """Check that an overflowing right-hand side empties the region."""
        self.add(2.0**-1074, 0, LARGEST_FINITE)
        self.assertEqual(self.region.kind, ce.RegionKind.EMPTY)

    def test_invalid_constraints(self):
        """Check that invalid constraints raise exceptions and leave the region
        unchanged.
        """
        before = self.region.snapshot()
        with self.assertRaises(ZeroNormalError):
            self.add(0, 0, 1)
        with self.assertRaises(ScalarFormatError):
            self.add(math.nan, 1, 1)
        self.assertEqual(self.region.snapshot(), before)
        self.assertEqual(self.region.counters.constraints, 0)

    def test_copy(self):
        """Check that a copy is independent of the original."""
        self.add(1, 1, 5)
        copy = self.region.copy()
        copy.add_constraint(RawConstraint(1.0, 1.0, 20.0))
        self.assertEqual(copy.kind, ce.RegionKind.POINT)
        self.assertEqual(self.region.kind, ce.RegionKind.POLYGON)
        self.assertEqual(len(self.region.snapshot().entries), 5)

    def test_clip_all(self):
        """Check that `clip_all` calls the step function after each constraint."""
        kinds = []
        constraints = [RawConstraint(1.0, 0.0, 10.0), RawConstraint(0.0, 1.0, 10.0)]
        ce.clip_all(self.region, constraints, lambda region: kinds.append(region.kind))
        self.assertEqual(kinds, [ce.RegionKind.SEGMENT, ce.RegionKind.POINT])

    def test_counters(self):
        """Check that side tests and direction comparisons are counted."""
        self.add(1, 1, 5)
        self.assertGreater(self.region.counters.side_tests, 0)
        self.assertGreater(self.region.counters.direction_comparisons, 0)


class RecordingContainer:
    """Edge container delegating to a region store and counting the calls."""

    def __init__(self, store):
        self.store = store
        self.calls = Counter()

    @property
    def comparisons(self):
        """Comparisons made by the wrapped store."""
        return self.store.comparisons

    def __getattr__(self, name):
        if name in ("store", "calls"):
            raise AttributeError(name)
        method = getattr(self.store, name)

        def wrapper(*args, **kwargs):
            self.calls[name] += 1
            return method(*args, **kwargs)

        return wrapper


class TestEdgeContainer(unittest.TestCase):
    """Test a region backed by another edge container."""

    def test_recording_container(self):
        """Check that a region clips the same way through any container
        providing the edge container operations.
        """
        constraints = [
            RawConstraint(1.0, 1.0, 3.0),
            RawConstraint(-1.0, 1.0, -7.0),
            RawConstraint(-1.0, -1.0, -17.0),
            RawConstraint(1.0, -1.0, -7.0),
            RawConstraint(0.0, 1.0, 1.0),
        ]
        reference = ce.clip_all(ce.new_box(10.0, 10.0), constraints)
        box = ce.new_box(10.0, 10.0)
        assert isinstance(box.store, RegionStore)
        container = RecordingContainer(box.store)
        region = ce.clip_all(ce.FeasibleRegion(container), constraints)
        self.assertEqual(region.snapshot(), reference.snapshot())
        self.assertIsNone(region.check_invariants())
        for name in (
            "locate_direction",
            "insert_edge",
            "remove_edges",
            "next_position",
            "previous_position",
            "edges",
        ):
            self.assertGreater(container.calls[name], 0, name)
        self.assertEqual(
            region.counters.direction_comparisons,
            reference.counters.direction_comparisons,
        )


class TestComparisonBudget(unittest.TestCase):
    """Test the number of direction comparisons per insertion."""

    def assert_budget(self, polygon, rng):
        """Insert the constraints of a polygon in random order and check the
        comparisons made by each insertion.
        """
        constraints = polygon.raw_constraints()
        rng.shuffle(constraints)
        side = testgen.start_box_side(polygon.beta)
        region = ce.new_box(side, side)
        for rc in constraints:
            size = region.store.size()
            before = region.counters.direction_comparisons
            region.add_constraint(rc)
            spent = region.counters.direction_comparisons - before
            self.assertLessEqual(spent, 4 * math.ceil(math.log2(size)) + 16)
        self.assertEqual(vertices(region), points(*polygon.vertices))

    def test_full_normal_set(self):
        """Check the budget on polygons using all 32 normals."""
        normals = testgen.normal_set(32)
        for seed in range(10):
            rng = random.Random(seed)
            self.assert_budget(testgen.build_polygon(normals, 8, rng), rng)

    def test_random_subsets(self):
        """Check the budget on polygons built from random valid subsets."""
        rng = random.Random(7)
        for normals in testgen.sample_valid_subsets(testgen.normal_set(32), 20, rng):
            self.assert_budget(testgen.build_polygon(normals, 8, rng), rng)


WELL_SCALED = st.builds(
    lambda magnitude, negative: -magnitude if negative else magnitude,
    st.floats(min_value=2.0**-10, max_value=2.0**10),
    st.booleans(),
)


def any_constraints():
    """Strategy of constraints with small integer coefficients."""
    return st.builds(
        lambda a, b, c: RawConstraint(float(a), float(b), float(c)),
        st.integers(-9, 9),
        st.integers(-9, 9),
        st.integers(-200, 200),
    ).filter(lambda rc: rc.a != 0 or rc.b != 0)


def wide_scalars(exponent, fmt):
    """Strategy of signed scalars of the format with magnitudes in
    [2^-exponent, 2^exponent].
    """
    return st.builds(
        lambda mantissa, power, negative: fmt.round_nearest(
            math.ldexp(-mantissa if negative else mantissa, power)
        ),
        st.floats(min_value=1.0, max_value=2.0, exclude_max=True),
        st.integers(-exponent, exponent - 1),
        st.booleans(),
    )


def wide_constraints(exponent, box_exponent, fmt):
    """Strategy of constraints with wide-magnitude coefficients whose line
    passes near a random point of the box [0, 2^box_exponent]^2.
    """

    def build(a, b, u, v, scale):
        x, y = math.ldexp(u, box_exponent), math.ldexp(v, box_exponent)
        return RawConstraint(a, b, fmt.round_nearest((a * x + b * y) * scale))

    return st.builds(
        build,
        wide_scalars(exponent, fmt),
        wide_scalars(exponent, fmt),
        st.floats(min_value=0.0, max_value=1.0),
        st.floats(min_value=0.0, max_value=1.0),
        st.sampled_from([1.0, 0.5, 1.0 + 2.0**-20, 2.0]),
    )


def is_exact(rc):
    """Return True if dividing by the dominant coefficient is exact."""
    dominant = max(abs(rc.a), abs(rc.b))
    return math.frexp(dominant)[0] == 0.5 and (
        min(abs(rc.a), abs(rc.b)) / dominant * dominant == min(abs(rc.a), abs(rc.b))
    )


class TestAgainstOracle(unittest.TestCase):
    """Compare the engine with the exact intersection after each insertion."""

    @settings(max_examples=150, deadline=None)
    @given(st.lists(any_constraints(), max_size=12), st.sampled_from([32, 64]))
    def test_contains_exact(self, constraints, bits):
        """Check that every region contains the exact set and that the region
        is empty only if the exact set is.
        """
        fmt = BINARY32 if bits == 32 else BINARY64
        region = ce.new_box(16.0, 16.0, fmt)
        inserted = []
        for rc in constraints:
            region.add_constraint(rc)
            inserted.append(rc)
            self.assertIsNone(region.check_invariants())
            exact = oracle.exact_intersection(inserted, (16, 16))
            comparison = oracle.compare(region.snapshot(), exact)
            self.assertTrue(comparison.contains_exact)
            if region.kind == ce.RegionKind.EMPTY:
                self.assertEqual(exact.kind, ce.RegionKind.EMPTY)
            if all(is_exact(rc) for rc in inserted):
                self.assertEqual(region.kind, exact.kind)
                self.assertTrue(comparison.exact_match)
            self.assertLessEqual(region.counters.divisions, 2 * len(inserted))

    def assert_conservative(self, constraints, fmt, side):
        """Clip the box [0, side]^2 and compare with the exact set after each
        insertion.
        """
        region = ce.new_box(side, side, fmt)
        for count, rc in enumerate(constraints, 1):
            region.add_constraint(rc)
            self.assertIsNone(region.check_invariants())
            exact = oracle.exact_intersection(constraints[:count], (side, side))
            comparison = oracle.compare(region.snapshot(), exact)
            self.assertTrue(comparison.contains_exact)
            if region.kind == ce.RegionKind.EMPTY:
                self.assertEqual(exact.kind, ce.RegionKind.EMPTY)
            self.assertLessEqual(region.counters.divisions, 2 * count)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(wide_constraints(400, 500, BINARY64), min_size=1, max_size=8))
    def test_contains_exact_wide_64(self, constraints):
        """Check conservativeness for coefficients spanning 2^-400 to 2^400 on
        a box of side 2^500.
        """
        self.assert_conservative(constraints, BINARY64, 2.0**500)

    @settings(max_examples=80, deadline=None)
    @given(st.lists(wide_constraints(60, 60, BINARY32), min_size=1, max_size=8))
    def test_contains_exact_wide_32(self, constraints):
        """Check conservativeness in 32-bit for coefficients spanning 2^-60 to
        2^60 on a box of side 2^60.
        """
        self.assert_conservative(constraints, BINARY32, 2.0**60)

    def test_extreme_coefficients(self):
        """Check constraints whose two coefficients differ by a factor of
        2^800.
        """
        side = 2.0**500
        constraints = [
            RawConstraint(2.0**400, 2.0**-400, 2.0**800),
            RawConstraint(-(2.0**-400), 2.0**400, 2.0**850),
            RawConstraint(-(2.0**400), -(2.0**399), -(2.0**901)),
            RawConstraint(3.0 * 2.0**-400, -(2.0**-401), 2.0**90),
        ]
        self.assert_conservative(constraints, BINARY64, side)

    @settings(max_examples=100, deadline=None)
    @given(
        st.lists(
            st.tuples(WELL_SCALED, WELL_SCALED),
            min_size=1,
            max_size=10,
        )
    )
    def test_sharpness(self, normals):
        """Check that the relative excess area of well-scaled systems is below
        the sharpness tolerance.
        """
        # Every constraint leaves the diamond |x - 8| + |y - 8| <= 4 feasible
        constraints = [
            RawConstraint(a, b, a * 8 + b * 8 - 4 * max(abs(a), abs(b)))
            for a, b in normals
        ]
        region = ce.clip_all(ce.new_box(16.0, 16.0), constraints)
        exact = oracle.exact_intersection(constraints, (16, 16))
        comparison = oracle.compare(region.snapshot(), exact)
        self.assertTrue(comparison.contains_exact)
        self.assertLessEqual(
            comparison.relative_excess_area, config.SHARPNESS_TOLERANCE
        )
