"""Directed random generation of test cases with exact integer geometry.

Polygons are built from subsets of normals equally spaced on the border of
the square [-8, 8] x [-8, 8]. Since every normal has a dominant coefficient
of +/-8, normalizing the generated constraints only shifts exponents, so the
clipping engine must reproduce the generated polygons exactly.
"""

import itertools
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, List, Optional, Sequence, Tuple

from feasible_region import config
from feasible_region.engine.clip_engine import RegionKind
from feasible_region.engine.constraint_normalizer import RawConstraint, classify_octant
from feasible_region.engine.rounding_kernel import FloatFormat
from feasible_region.verification.oracle import RationalPolygon

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

Vector = Tuple[int, int]


class GeneratorError(Exception):
    """Exception raised when a test case cannot be generated."""


def _rotate(vector: Vector, times: int) -> Vector:
    """Rotate a vector counter-clockwise by times * pi/2."""
    x, y = vector
    for _ in range(times % 4):
        x, y = -y, x
    return x, y


def cross(u: Vector, v: Vector) -> int:
    """Return u1 * v2 - u2 * v1."""
    return u[0] * v[1] - u[1] * v[0]


def _dot(u: Vector, v: Vector) -> int:
    return u[0] * v[0] + u[1] * v[1]


def angle_key(vector: Vector) -> Tuple[int, Fraction]:
    """Sort key of a nonzero vector by counter-clockwise angle from (1, 0)."""
    a, b = vector
    octant = classify_octant(a, b)
    if octant in (0, 3, 4, 7):
        n = Fraction(abs(b), abs(a))
    else:
        n = Fraction(abs(a), abs(b))
    return octant, n if octant % 2 == 0 else -n


def normal_set(size: int = config.POLYGON_NORMAL_SET) -> List[Vector]:
    """Return the set of 32 or 64 normals sorted counter-clockwise.

    Raises:
        GeneratorError: If the size is neither 32 nor 64.
    """
    scale = config.NORMAL_SCALE
    if size == 32:
        seeds = [(scale, 2 * k) for k in range(-4, 4)]
    elif size == 64:
        seeds = [(scale, k) for k in range(-8, 8)]
    else:
        raise GeneratorError(f"Unsupported normal set size {size}, use 32 or 64")
    normals = [_rotate(seed, i) for i in range(4) for seed in seeds]
    return sorted(normals, key=angle_key)


def is_valid_subset(normals: Sequence[Vector]) -> bool:
    """Return True if no angular gap between consecutive normals, sorted
    counter-clockwise, reaches pi.
    """
    ordered = sorted(normals, key=angle_key)
    if len(ordered) < 3:
        return False
    return all(
        cross(ordered[i - 1], ordered[i]) > 0 for i in range(len(ordered))
    )


def valid_subsets(
    normals: Sequence[Vector],
    max_size: int = config.MAX_EXHAUSTIVE_SUBSET_SIZE,
    predicate: Optional[Callable[[Tuple[Vector, ...]], bool]] = None,
) -> Iterator[Tuple[Vector, ...]]:
    """Enumerate the valid subsets with at most `max_size` normals.

    Args:
        normals: Normal set sorted counter-clockwise.
        max_size: Largest subset size.
        predicate: Optional filter applied to valid subsets.
    """
    for size in range(3, min(max_size, len(normals)) + 1):
        for subset in itertools.combinations(normals, size):
            if is_valid_subset(subset) and (predicate is None or predicate(subset)):
                yield subset


def sample_valid_subsets(
    normals: Sequence[Vector], count: int, rng: random.Random, min_size: int = 3
) -> List[Tuple[Vector, ...]]:
    """Draw `count` random valid subsets, sorted counter-clockwise."""
    subsets = []
    while len(subsets) < count:
        size = rng.randint(min_size, len(normals))
        indexes = sorted(rng.sample(range(len(normals)), size))
        subset = tuple(normals[i] for i in indexes)
        if is_valid_subset(subset):
            subsets.append(subset)
    return subsets


def random_orders(count: int, length: int, rng: random.Random) -> List[List[int]]:
    """Return `count` random permutations of range(length)."""
    orders = []
    for _ in range(count):
        order = list(range(length))
        rng.shuffle(order)
        orders.append(order)
    return orders


def check_beta(beta: int, fmt: FloatFormat) -> None:
    """Check that generated quantities are exact scalars of the format.

    Raises:
        GeneratorError: If beta is out of range for the format.
    """
    limit = config.MAX_BETA_64 if fmt.bits == 64 else config.MAX_BETA_32
    if not 1 <= beta <= limit:
        raise GeneratorError(
            f"beta must be between 1 and {limit} for {fmt.bits}-bit scalars, got {beta}"
        )


def start_box_side(beta: int) -> float:
    """Side of the start box of generated cases."""
    return float(2 ** (beta + config.START_BOX_OFFSET))


@dataclass(frozen=True)
class GeneratedPolygon:
    """Convex polygon with integer vertices and sup-norm edge lengths.

    Edge i has normal `normals[i]` and joins vertex i to vertex i + 1.

    Attributes:
        beta: Size parameter.
        normals: Inner normals sorted counter-clockwise.
        lengths: Sup-norm lengths of the edges.
        vertices: Integer vertices.
        constraints: Right-hand sides, normals[i] . vertices[i].
    """

    beta: int
    normals: Tuple[Vector, ...]
    lengths: Tuple[int, ...]
    vertices: Tuple[Vector, ...]
    constraints: Tuple[int, ...]

    def raw_constraints(self) -> List[RawConstraint]:
        """Return the constraints of the polygon."""
        return [
            RawConstraint(float(a), float(b), float(c))
            for (a, b), c in zip(self.normals, self.constraints)
        ]

    def expected(self) -> RationalPolygon:
        """Return the exact polygon."""
        return RationalPolygon.from_points(self.vertices)

    def check(self) -> None:
        """Check the construction bounds and identities.

        Raises:
            GeneratorError: If an invariant does not hold.
        """
        beta, count = self.beta, len(self.normals)
        if sum(n * a for n, (a, _) in zip(self.lengths, self.normals)) or sum(
            n * b for n, (_, b) in zip(self.lengths, self.normals)
        ):
            raise GeneratorError("The edges do not close the polygon")
        for i in range(count):
            x, y = self.vertices[i]
            a, b = self.normals[i]
            nx, ny = self.vertices[(i + 1) % count]
            if (nx, ny) != (x + self.lengths[i] * b, y - self.lengths[i] * a):
                raise GeneratorError(f"Edge {i} does not join its vertices")
            if not (0 <= x < 2 ** (beta + 17) and 0 <= y < 2 ** (beta + 17)):
                raise GeneratorError(f"Vertex {i} out of bounds")
            if not 1 <= self.lengths[i] < 2 ** (beta + 12):
                raise GeneratorError(f"Length {i} out of bounds")
            if self.constraints[i] != a * x + b * y or abs(
                self.constraints[i]
            ) > 2 ** (beta + 21):
                raise GeneratorError(f"Right-hand side {i} is wrong")


def build_polygon(
    normals: Sequence[Vector], beta: int, rng: random.Random
) -> GeneratedPolygon:
    """Build a random polygon whose edges have the given normals.

    Args:
        normals: Valid subset sorted counter-clockwise.
        beta: Size parameter, at least 1.
        rng: Random generator.

    Raises:
        GeneratorError: If the subset is not valid.
    """
    if not is_valid_subset(normals):
        raise GeneratorError(f"Invalid subset of normals {list(normals)}")
    if beta < 1:
        raise GeneratorError(f"beta must be positive, got {beta}")
    normals = sorted(normals, key=angle_key)
    count = len(normals)
    t = [rng.randint(1, 2**beta - 1) for _ in range(count)]
    delta = (
        sum(tp * a for tp, (a, _) in zip(t, normals)),
        sum(tp * b for tp, (_, b) in zip(t, normals)),
    )

    if delta == (0, 0):
        d = 1
        j = count - 1
        lengths = list(t)
    else:
        minus_delta = (-delta[0], -delta[1])
        # Cone of consecutive normals holding -delta
        j = next(
            i
            for i in range(count)
            if cross(normals[i], minus_delta) >= 0
            and cross(minus_delta, normals[(i + 1) % count]) > 0
        )
        nu, sigma = normals[j], normals[(j + 1) % count]
        d = cross(nu, sigma)
        alpha_nu = cross(minus_delta, sigma)
        alpha_sigma = cross(nu, minus_delta)
        lengths = [d * tp for tp in t]
        lengths[j] += alpha_nu
        lengths[(j + 1) % count] += alpha_sigma

    # Walk the edges from the end of edge j + 1, so the two long edges come last
    origin = (j + 2) % count
    walk = {origin: (0, 0)}
    index, x, y = origin, 0, 0
    for _ in range(count - 1):
        a, b = normals[index]
        x, y = x + lengths[index] * b, y - lengths[index] * a
        index = (index + 1) % count
        walk[index] = (x, y)
    min_x = min(p[0] for p in walk.values())
    min_y = min(p[1] for p in walk.values())
    shift_x = rng.randrange(2 ** (beta + 16)) - min_x
    shift_y = rng.randrange(2 ** (beta + 16)) - min_y
    vertices = tuple((walk[i][0] + shift_x, walk[i][1] + shift_y) for i in range(count))
    constraints = tuple(a * x + b * y for (a, b), (x, y) in zip(normals, vertices))

    polygon = GeneratedPolygon(
        beta, tuple(normals), tuple(lengths), vertices, constraints
    )
    polygon.check()
    LOGGER.debug("Built a %d-gon with d = %d", count, d)
    return polygon


def probe_constraints(
    vertices: Sequence[Vector],
    nu: Vector,
    beta: int,
    rng: random.Random,
    samples_per_gap: int = config.PROBE_SAMPLES_PER_GAP,
) -> List[RawConstraint]:
    """Return probe constraints nu . (x, y) >= u for a region.

    The levels u are the distinct values of nu at the vertices, random values
    strictly inside each gap between consecutive levels, and two sentinels.
    """
    levels = sorted({nu[0] * x + nu[1] * y for x, y in vertices})
    sentinel = 2 ** (beta + config.PROBE_SENTINEL_OFFSET)
    bounds = [-sentinel] + levels + [sentinel]
    values = list(bounds)
    for low, high in zip(bounds, bounds[1:]):
        if high - low >= 2:
            values.extend(
                rng.randint(low + 1, high - 1) for _ in range(samples_per_gap)
            )
    return [RawConstraint(float(nu[0]), float(nu[1]), float(u)) for u in values]


@dataclass
class DegenerateCase:
    """Constraint system whose exact feasible set is degenerate.

    Attributes:
        kind: Expected shape.
        beta: Size parameter.
        constraints: Constraints, in insertion order.
        vertices: Integer vertices of the expected set.
    """

    kind: RegionKind
    beta: int
    constraints: List[RawConstraint] = field(default_factory=list)
    vertices: List[Vector] = field(default_factory=list)

    def expected(self) -> RationalPolygon:
        """Return the exact set."""
        return RationalPolygon.from_points(self.vertices)


def _pinning_pair(normal: Vector, point: Vector) -> List[RawConstraint]:
    """Constraints normal . p >= normal . point and its opposite."""
    a, b = normal
    c = a * point[0] + b * point[1]
    return [
        RawConstraint(float(a), float(b), float(c)),
        RawConstraint(float(-a), float(-b), float(-c)),
    ]


def gen_degenerate(kind: RegionKind, beta: int, rng: random.Random) -> DegenerateCase:
    """Generate a system whose feasible set is a point, a segment or empty.

    Raises:
        GeneratorError: If the kind is not degenerate.
    """
    normals = normal_set(32)
    low, high = 2 ** (beta + 14), 2 ** (beta + 15)
    point = (rng.randrange(low, high), rng.randrange(low, high))
    u = rng.choice(normals)
    case = DegenerateCase(kind, beta)

    if kind == RegionKind.POINT:
        v = rng.choice([n for n in normals if cross(u, n) != 0])
        case.constraints = _pinning_pair(u, point) + _pinning_pair(v, point)
        case.vertices = [point]
    elif kind == RegionKind.SEGMENT:
        direction = (u[1], -u[0])
        length = rng.randint(1, 2**beta)
        end = (point[0] + length * direction[0], point[1] + length * direction[1])
        v = rng.choice([n for n in normals if _dot(n, direction) > 0])
        w = rng.choice([n for n in normals if _dot(n, direction) < 0])
        case.constraints = _pinning_pair(u, point) + [
            RawConstraint(float(v[0]), float(v[1]), float(_dot(v, point))),
            RawConstraint(float(w[0]), float(w[1]), float(_dot(w, end))),
        ]
        case.vertices = [point, end]
    elif kind == RegionKind.EMPTY:
        c = u[0] * point[0] + u[1] * point[1]
        gap = rng.randint(1, 2**beta)
        case.constraints = [
            RawConstraint(float(u[0]), float(u[1]), float(c)),
            RawConstraint(float(-u[0]), float(-u[1]), float(-c + gap)),
        ]
    else:
        raise GeneratorError(f"{kind.value} is not a degenerate kind")
    rng.shuffle(case.constraints)
    return case
