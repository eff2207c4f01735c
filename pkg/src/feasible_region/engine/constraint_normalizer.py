"""Octant classification and conservative normalization of constraints.

A constraint a*x + b*y >= c is divided by the absolute value of its dominant
coefficient. The normal then falls in one of eight octants of width pi/4 and
is stored as the octant index plus the magnitude n of the secondary
coefficient:

====== ================ =============== ============
Octant Condition        Dominant        Normal
====== ================ =============== ============
0      a > b >= 0       a               (1, n)
1      b >= a > 0       b               (n, 1)
2      b > -a >= 0      b               (-n, 1)
3      -a >= b > 0      a               (-1, n)
4      -a > -b >= 0     a               (-1, -n)
5      -b >= -a > 0     b               (-n, -1)
6      -b > a >= 0      b               (n, -1)
7      a >= -b > 0      a               (1, -n)
====== ================ =============== ============

The signed secondary coefficient is rounded up and the right-hand side is
rounded down. On the first quadrant the normalized half-plane contains the
original one.
"""

# COMPLETED
import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Tuple, Union

from feasible_region.engine.rounding_kernel import (
    BINARY64,
    FloatFormat,
    check_scalar,
    ru_div,
)

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

# Octants in which the dominant coefficient is a (otherwise it is b)
_A_DOMINANT = (0, 3, 4, 7)

# Sign of the dominant and of the secondary coefficient in the normalized form
_DOMINANT_SIGN = (1, 1, 1, -1, -1, -1, -1, 1)
_SECONDARY_SIGN = (1, 1, -1, 1, -1, -1, 1, -1)


class ZeroNormalError(Exception):
    """Exception raised when both coefficients of a constraint are zero."""

    def __init__(self, a: float, b: float) -> None:
        self.message = f"Invalid constraint - the normal ({a!r}, {b!r}) is zero"
        super().__init__(self.message)


class Ordering(Enum):
    """Result of the comparison of two directions."""

    BEFORE = -1
    EQUAL = 0
    AFTER = 1


@dataclass(frozen=True)
class RawConstraint:
    """Inequality a*x + b*y >= c as given by the caller."""

    a: float
    b: float
    c: float

    def value_at(self, x: Fraction, y: Fraction) -> Fraction:
        """Return a*x + b*y - c evaluated exactly."""
        return Fraction(self.a) * x + Fraction(self.b) * y - Fraction(self.c)


@dataclass(frozen=True)
class DirectionKey:
    """Direction of a normalized normal: octant and secondary magnitude."""

    octant: int
    n: float


@dataclass(frozen=True)
class NormalizedConstraint:
    """Constraint in normalized form with its relaxed right-hand side."""

    octant: int
    n: float
    c: float

    @property
    def key(self) -> DirectionKey:
        """Direction key of the normal."""
        return DirectionKey(self.octant, self.n)

    def coefficients(self) -> Tuple[float, float]:
        """Return the normalized coefficients (a, b)."""
        return reconstruct_coefficients(self)

    def value_at(self, x: Fraction, y: Fraction) -> Fraction:
        """Return a*x + b*y - c evaluated exactly."""
        a, b = reconstruct_coefficients(self)
        return Fraction(a) * x + Fraction(b) * y - Fraction(self.c)


class _OverflowInfeasible:
    """Marker returned by `normalize` when the right-hand side overflows."""

    def __repr__(self) -> str:
        return "OVERFLOW_INFEASIBLE"


OVERFLOW_INFEASIBLE = _OverflowInfeasible()

NormalizeResult = Union[NormalizedConstraint, _OverflowInfeasible]


def classify_octant(a: Union[int, float], b: Union[int, float]) -> int:
    """Return the octant of the normal (a, b).

    Raises:
        ZeroNormalError: If a = b = 0.
    """
    # pylint: disable=too-many-return-statements
    if a > b >= 0:
        return 0
    if b >= a > 0:
        return 1
    if b > -a >= 0:
        return 2
    if -a >= b > 0:
        return 3
    if -a > -b >= 0:
        return 4
    if -b >= -a > 0:
        return 5
    if -b > a >= 0:
        return 6
    if a >= -b > 0:
        return 7
    raise ZeroNormalError(a, b)


def reconstruct_coefficients(
    nc: Union[NormalizedConstraint, DirectionKey]
) -> Tuple[float, float]:
    """Return the normalized coefficients (a, b), dominant one being +/-1."""
    dominant = float(_DOMINANT_SIGN[nc.octant])
    secondary = _SECONDARY_SIGN[nc.octant] * nc.n + 0.0
    if nc.octant in _A_DOMINANT:
        return dominant, secondary
    return secondary, dominant


def _canonical_octant(octant: int, n: float) -> Tuple[int, float]:
    """Move a rounded secondary magnitude that reached the closed end of the
    next octant into that octant, so each direction has a single key.
    """
    if octant % 2 == 0 and n == 1.0:
        return octant + 1, 1.0
    if octant % 2 == 1 and n == 0.0:
        return (octant + 1) % 8, 0.0
    return octant, n


def normalize(
    rc: RawConstraint,
    fmt: FloatFormat = BINARY64,
    count_division: Optional[Callable[[], None]] = None,
) -> NormalizeResult:
    """Return the conservative normalized form of a raw constraint.

    Args:
        rc: Raw constraint with finite coefficients of the format.
        fmt: Binary format of the scalars.
        count_division: Optional callable invoked once per division.

    Returns:
        The normalized constraint, or OVERFLOW_INFEASIBLE when the relaxed
        right-hand side exceeds the largest finite value, in which case no
        point of a box satisfying mx + my < omega is feasible.

    Raises:
        ZeroNormalError: If a = b = 0.
        ScalarFormatError: If a coefficient is not a finite scalar.
    """
    a = check_scalar(rc.a, fmt)
    b = check_scalar(rc.b, fmt)
    c = check_scalar(rc.c, fmt)
    octant = classify_octant(a, b)
    if octant in _A_DOMINANT:
        dominant, secondary = abs(a), abs(b)
    else:
        dominant, secondary = abs(b), abs(a)

    if secondary == 0:
        n = 0.0
    else:
        if count_division:
            count_division()
        if _SECONDARY_SIGN[octant] > 0:
            n = ru_div(secondary, dominant, fmt)
        else:
            n = -ru_div(-secondary, dominant, fmt) + 0.0

    if count_division:
        count_division()
    neg_c = ru_div(-c, dominant, fmt)
    if neg_c <= -fmt.largest:
        LOGGER.debug("Right-hand side of %s overflows, the region is empty", rc)
        return OVERFLOW_INFEASIBLE
    # Rounded-down c/dominant below -omega is vacuous inside the box
    relaxed_c = -neg_c + 0.0 if neg_c != math.inf else -fmt.largest

    octant, n = _canonical_octant(octant, n)
    return NormalizedConstraint(octant, n, relaxed_c)


def opposite_key(key: DirectionKey) -> DirectionKey:
    """Return the key of the negated normal."""
    return DirectionKey((key.octant + 4) % 8, key.n)


def compare_directions(k1: DirectionKey, k2: DirectionKey) -> Ordering:
    """Compare two directions by counter-clockwise angle from octant 0.

    Within an even octant n grows with the angle, within an odd one it
    decreases.
    """
    if k1.octant != k2.octant:
        return Ordering.BEFORE if k1.octant < k2.octant else Ordering.AFTER
    if k1.n == k2.n:
        return Ordering.EQUAL
    if (k1.n < k2.n) == (k1.octant % 2 == 0):
        return Ordering.BEFORE
    return Ordering.AFTER
