"""Test the module `feasible_region.engine.constraint_normalizer`."""

# COMPLETED
import math
import unittest
from fractions import Fraction

from hypothesis import assume, given
from hypothesis import strategies as st

from feasible_region.engine import constraint_normalizer as cn
from feasible_region.engine.rounding_kernel import (
    BINARY32,
    LARGEST_FINITE,
    ScalarFormatError,
)
from feasible_region.verification.testgen import normal_set


class TestClassifyOctant(unittest.TestCase):
    """Test the function `classify_octant`."""

    def test_axes_and_diagonals(self):
        """Check the octant of the axes and the diagonals."""
        expected = {
            (1, 0): 0,
            (2, 1): 0,
            (1, 1): 1,
            (0, 1): 2,
            (-1, 1): 3,
            (-1, 0): 4,
            (-1, -1): 5,
            (0, -1): 6,
            (1, -1): 7,
        }
        for (a, b), octant in expected.items():
            self.assertEqual(cn.classify_octant(a, b), octant, (a, b))

    def test_zero_normal(self):
        """Check that a ZeroNormalError exception is raised for a zero normal."""
        with self.assertRaises(cn.ZeroNormalError):
            cn.classify_octant(0, 0)
        with self.assertRaises(cn.ZeroNormalError):
            cn.normalize(cn.RawConstraint(0.0, 0.0, 1.0))


class TestNormalize(unittest.TestCase):
    """Test the function `normalize`."""

    def test_simple(self):
        """Check the normalization of 2x + y >= 4."""
        nc = cn.normalize(cn.RawConstraint(2.0, 1.0, 4.0))
        self.assertEqual(nc, cn.NormalizedConstraint(0, 0.5, 2.0))
        self.assertEqual(nc.coefficients(), (1.0, 0.5))

    def test_rounding_directions(self):
        """Check that the secondary coefficient is rounded up and the
        right-hand side down.
        """
        nc = cn.normalize(cn.RawConstraint(3.0, 1.0, 1.0))
        self.assertEqual(nc.octant, 0)
        self.assertGreater(Fraction(nc.n), Fraction(1, 3))
        self.assertLess(Fraction(nc.c), Fraction(1, 3))
        # Negative secondary coefficient: the magnitude is rounded down
        nc = cn.normalize(cn.RawConstraint(3.0, -1.0, -1.0))
        self.assertEqual(nc.octant, 7)
        self.assertLess(Fraction(nc.n), Fraction(1, 3))
        self.assertLess(Fraction(nc.c), Fraction(-1, 3))

    def test_division_count(self):
        """Check that at most two divisions are made."""
        calls = []

        def count():
            calls.append(1)

        cn.normalize(cn.RawConstraint(2.0, 1.0, 4.0), count_division=count)
        self.assertEqual(len(calls), 2)
        calls.clear()
        cn.normalize(cn.RawConstraint(1.0, 0.0, 3.0), count_division=count)
        self.assertEqual(len(calls), 1)

    def test_diagonal(self):
        """Check that equal coefficients belong to the odd octant with n = 1."""
        nc = cn.normalize(cn.RawConstraint(5.0, 5.0, 10.0))
        self.assertEqual(nc, cn.NormalizedConstraint(1, 1.0, 2.0))

    def test_underflow_moves_to_next_octant(self):
        """Check that a secondary magnitude rounded down to zero in an odd
        octant gives the key of the next axis.
        """
        nc = cn.normalize(cn.RawConstraint(-(2.0**-1074), -2.0, 0.0))
        self.assertEqual(nc.key, cn.DirectionKey(6, 0.0))

    def test_overflow_infeasible(self):
        """Check that an overflowing right-hand side gives OVERFLOW_INFEASIBLE."""
        result = cn.normalize(cn.RawConstraint(2.0**-1074, 0.0, LARGEST_FINITE))
        self.assertIs(result, cn.OVERFLOW_INFEASIBLE)

    def test_vacuous_right_hand_side(self):
        """Check that a right-hand side below the lowest value is clamped."""
        nc = cn.normalize(cn.RawConstraint(2.0**-1074, 0.0, -LARGEST_FINITE))
        self.assertEqual(nc.c, -LARGEST_FINITE)

    def test_invalid_scalars(self):
        """Check that coefficients outside of the format are rejected."""
        with self.assertRaises(ScalarFormatError):
            cn.normalize(cn.RawConstraint(math.inf, 1.0, 0.0))
        with self.assertRaises(ScalarFormatError):
            cn.normalize(cn.RawConstraint(0.1, 1.0, 0.0), BINARY32)

    def test_exact_normal_set(self):
        """Check that the normals of the generator are normalized exactly and
        in counter-clockwise order.
        """
        keys = []
        for a, b in normal_set(64):
            nc = cn.normalize(cn.RawConstraint(float(a), float(b), 8.0))
            self.assertEqual(nc.c, 1.0)
            self.assertEqual(
                nc.coefficients(), (Fraction(a, 8), Fraction(b, 8)), (a, b)
            )
            keys.append(nc.key)
        for left, right in zip(keys, keys[1:]):
            self.assertEqual(cn.compare_directions(left, right), cn.Ordering.BEFORE)

    @given(
        st.integers(-1000, 1000),
        st.integers(-1000, 1000),
        st.integers(-(10**6), 10**6),
        st.integers(0, 10**4),
        st.integers(0, 10**4),
    )
    def test_relaxation(self, a, b, c, x, y):
        """Check that every point of the first quadrant satisfying the
        constraint satisfies its normalized form.
        """
        assume(a != 0 or b != 0)
        rc = cn.RawConstraint(float(a), float(b), float(c))
        point = (Fraction(x, 7), Fraction(y, 3))
        assume(rc.value_at(*point) >= 0)
        nc = cn.normalize(rc)
        self.assertGreaterEqual(nc.value_at(*point), 0)


class TestDirections(unittest.TestCase):
    """Test direction keys and their comparison."""

    def test_compare_within_octant(self):
        """Check that n grows with the angle in even octants and decreases in
        odd ones.
        """
        self.assertEqual(
            cn.compare_directions(cn.DirectionKey(0, 0.25), cn.DirectionKey(0, 0.5)),
            cn.Ordering.BEFORE,
        )
        self.assertEqual(
            cn.compare_directions(cn.DirectionKey(1, 0.5), cn.DirectionKey(1, 0.25)),
            cn.Ordering.BEFORE,
        )
        self.assertEqual(
            cn.compare_directions(cn.DirectionKey(3, 0.5), cn.DirectionKey(3, 0.5)),
            cn.Ordering.EQUAL,
        )

    def test_compare_octants(self):
        """Check that keys of different octants compare by octant."""
        self.assertEqual(
            cn.compare_directions(cn.DirectionKey(7, 0.0), cn.DirectionKey(2, 0.9)),
            cn.Ordering.AFTER,
        )

    def test_opposite_key(self):
        """Check that the opposite key lies four octants away."""
        self.assertEqual(
            cn.opposite_key(cn.DirectionKey(1, 0.5)), cn.DirectionKey(5, 0.5)
        )
        self.assertEqual(
            cn.opposite_key(cn.DirectionKey(6, 0.0)), cn.DirectionKey(2, 0.0)
        )

    def test_reconstruct_coefficients(self):
        """Check the coefficients rebuilt from each octant."""
        expected = {
            0: (1.0, 0.5),
            1: (0.5, 1.0),
            2: (-0.5, 1.0),
            3: (-1.0, 0.5),
            4: (-1.0, -0.5),
            5: (-0.5, -1.0),
            6: (0.5, -1.0),
            7: (1.0, -0.5),
        }
        for octant, coefficients in expected.items():
            nc = cn.NormalizedConstraint(octant, 0.5, 0.0)
            self.assertEqual(cn.reconstruct_coefficients(nc), coefficients)

    def test_no_negative_zero(self):
        """Check that a zero secondary coefficient is a positive zero."""
        a, _ = cn.reconstruct_coefficients(cn.DirectionKey(2, 0.0))
        self.assertEqual(math.copysign(1.0, a), 1.0)
