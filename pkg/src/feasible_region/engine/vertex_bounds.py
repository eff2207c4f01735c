"""Enclosures of vertices and side tests against constraints.

The vertex of two consecutive edges j and k has homogeneous coordinates

    r = c_j b_k - c_k b_j,  s = a_j c_k - a_k c_j,  d = a_j b_k - a_k b_j

with d > 0, and lies at (r/d, s/d). A `VertexBox` holds round-up bounds of
(-r, -s, -d, r, s, d). Side tests first try these bounds and fall back to the
exact sign of a*r + b*s - c*d.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Tuple

from feasible_region.engine.constraint_normalizer import (
    NormalizedConstraint,
    reconstruct_coefficients,
)
from feasible_region.engine.rounding_kernel import (
    BINARY64,
    FloatFormat,
    Sign,
    exact_sign_3x3,
    ru_add,
    ru_mul,
)

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())


@dataclass(frozen=True)
class VertexBox:
    """Round-up bounds of the homogeneous coordinates of a vertex.

    Attributes:
        ur: Upper bound of -r.
        us: Upper bound of -s.
        ud: Upper bound of -d.
        or_: Upper bound of r.
        os_: Upper bound of s.
        od_: Upper bound of d.
    """

    ur: float
    us: float
    ud: float
    or_: float
    os_: float
    od_: float


class SideResult(Enum):
    """Position of a vertex relative to the line of a constraint."""

    STRICTLY_FEASIBLE = "StrictlyFeasible"
    STRICTLY_INFEASIBLE = "StrictlyInfeasible"
    ON_LINE = "OnLine"


def _products(
    a: float, b: float, c: float, j: NormalizedConstraint, k: NormalizedConstraint
) -> Tuple[Tuple[int, float, float, float], ...]:
    """Return the six signed triples of a*r + b*s - c*d."""
    a_j, b_j = reconstruct_coefficients(j)
    a_k, b_k = reconstruct_coefficients(k)
    c_j, c_k = j.c, k.c
    return (
        (1, a, c_j, b_k),
        (-1, a, c_k, b_j),
        (1, b, a_j, c_k),
        (-1, b, a_k, c_j),
        (1, c, a_k, b_j),
        (-1, c, a_j, b_k),
    )


def compute_vertex_box(
    edge_j: NormalizedConstraint,
    edge_k: NormalizedConstraint,
    fmt: FloatFormat = BINARY64,
) -> VertexBox:
    """Return the enclosure of the vertex of two consecutive edges.

    Args:
        edge_j: Edge preceding `edge_k` in counter-clockwise order.
        edge_k: Edge whose first vertex is computed.
        fmt: Binary format of the scalars.

    Returns:
        The six bounds. Overflowing bounds are +inf and remain sound.
    """
    a_j, b_j = reconstruct_coefficients(edge_j)
    a_k, b_k = reconstruct_coefficients(edge_k)
    c_j, c_k = edge_j.c, edge_k.c

    def bound(u1: float, v1: float, u2: float, v2: float) -> float:
        return ru_add(ru_mul(u1, v1, fmt), ru_mul(u2, v2, fmt), fmt)

    return VertexBox(
        ur=bound(c_k, b_j, -c_j, b_k),
        us=bound(a_k, c_j, -a_j, c_k),
        ud=bound(a_k, b_j, -a_j, b_k),
        or_=bound(c_j, b_k, -c_k, b_j),
        os_=bound(a_j, c_k, -a_k, c_j),
        od_=bound(a_j, b_k, -a_k, b_j),
    )


def exact_homogeneous(
    edge_j: NormalizedConstraint, edge_k: NormalizedConstraint
) -> Tuple[Fraction, Fraction, Fraction]:
    """Return the exact (r, s, d) of the vertex of two edges."""
    a_j, b_j = (Fraction(v) for v in reconstruct_coefficients(edge_j))
    a_k, b_k = (Fraction(v) for v in reconstruct_coefficients(edge_k))
    c_j, c_k = Fraction(edge_j.c), Fraction(edge_k.c)
    return (
        c_j * b_k - c_k * b_j,
        a_j * c_k - a_k * c_j,
        a_j * b_k - a_k * b_j,
    )


def exact_vertex(
    edge_j: NormalizedConstraint, edge_k: NormalizedConstraint
) -> Tuple[Fraction, Fraction]:
    """Return the exact vertex (r/d, s/d) of two consecutive edges.

    Raises:
        ZeroDivisionError: If the edges are parallel.
    """
    r, s, d = exact_homogeneous(edge_j, edge_k)
    return r / d, s / d


def box_contains(
    box: VertexBox, edge_j: NormalizedConstraint, edge_k: NormalizedConstraint
) -> bool:
    """Return True if the box encloses the exact (r, s, d)."""

    def below(value: Fraction, upper: float) -> bool:
        return upper == math.inf or value <= Fraction(upper)

    r, s, d = exact_homogeneous(edge_j, edge_k)
    return all(
        below(-value, neg_upper) and below(value, upper)
        for value, neg_upper, upper in (
            (r, box.ur, box.or_),
            (s, box.us, box.os_),
            (d, box.ud, box.od_),
        )
    )


def _upper_product(
    coef: float, upper: float, neg_upper: float, fmt: FloatFormat
) -> float:
    """Upper bound of coef * v knowing -neg_upper <= v <= upper."""
    if coef >= 0:
        return ru_mul(coef, upper, fmt)
    return ru_mul(-coef, neg_upper, fmt)


def side_of_constraint(
    box: VertexBox,
    nc: NormalizedConstraint,
    edge_j: NormalizedConstraint,
    edge_k: NormalizedConstraint,
    fmt: FloatFormat = BINARY64,
    count_fallback: Optional[Callable[[], None]] = None,
) -> SideResult:
    """Return the side of the vertex of (edge_j, edge_k) relative to `nc`.

    Args:
        box: Enclosure returned by `compute_vertex_box(edge_j, edge_k)`.
        nc: Constraint to test.
        edge_j: Edge preceding `edge_k` in counter-clockwise order.
        edge_k: Edge whose first vertex is tested.
        fmt: Binary format of the scalars.
        count_fallback: Optional callable invoked when the exact stage runs.

    Returns:
        The exact side of the vertex.
    """
    a, b = reconstruct_coefficients(nc)
    c = nc.c
    # Upper bound of a*r + b*s - c*d, then of its opposite
    value_hi = ru_add(
        ru_add(
            _upper_product(a, box.or_, box.ur, fmt),
            _upper_product(b, box.os_, box.us, fmt),
            fmt,
        ),
        _upper_product(-c, box.od_, box.ud, fmt),
        fmt,
    )
    neg_value_hi = ru_add(
        ru_add(
            _upper_product(-a, box.or_, box.ur, fmt),
            _upper_product(-b, box.os_, box.us, fmt),
            fmt,
        ),
        _upper_product(c, box.od_, box.ud, fmt),
        fmt,
    )
    if neg_value_hi < 0:
        return SideResult.STRICTLY_FEASIBLE
    if value_hi < 0:
        return SideResult.STRICTLY_INFEASIBLE
    if value_hi <= 0 and neg_value_hi <= 0:
        return SideResult.ON_LINE

    if count_fallback:
        count_fallback()
    sign = exact_sign_3x3(_products(a, b, c, edge_j, edge_k))
    LOGGER.debug("Exact side test of %s against %s, %s: %s", nc, edge_j, edge_k, sign)
    if sign == Sign.POSITIVE:
        return SideResult.STRICTLY_FEASIBLE
    if sign == Sign.NEGATIVE:
        return SideResult.STRICTLY_INFEASIBLE
    return SideResult.ON_LINE
