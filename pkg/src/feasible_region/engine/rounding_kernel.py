"""Round-up scalar arithmetic and exact sign evaluation.

Every operation returns the least value of the selected binary format that is
not below the exact result. Upward rounding is derived from error-free
transformations of round-to-nearest results, so results never depend on any
process-wide rounding state.
"""

import logging
import math
import sys
from enum import IntEnum
from fractions import Fraction
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())

# Dekker splitter for 53-bit significands (2^27 + 1)
_SPLITTER = 134217729.0

# Magnitudes for which two-product is error-free in binary64 without
# overflow in the split or underflow in the partial products
_SPLIT_MAX = 2.0**995
_SPLIT_MIN = 2.0**-960
_PRODUCT_MAX = 2.0**1000
_PRODUCT_MIN = 2.0**-900

# Factor magnitudes accepted by the expansion-based sign evaluation
_EXPANSION_MAX = 2.0**250
_EXPANSION_MIN = 2.0**-250

Number = Union[int, float, Fraction]

# A signed triple (sign, f1, f2, f3) standing for sign * f1 * f2 * f3
SignedTriple = Tuple[int, float, float, float]


class ScalarFormatError(Exception):
    """Exception raised when a value cannot be used as a scalar of the
    selected binary format.
    """


class Sign(IntEnum):
    """Exact sign of a quantity."""

    NEGATIVE = -1
    ZERO = 0
    POSITIVE = 1

    @classmethod
    def of(cls, value: Number) -> "Sign":
        """Return the sign of a number."""
        if value > 0:
            return cls.POSITIVE
        if value < 0:
            return cls.NEGATIVE
        return cls.ZERO


class FloatFormat:
    """Binary floating-point format of the scalars.

    Scalars are always Python floats. In the 32-bit format they hold values
    that are exactly representable as binary32.

    Attributes:
        bits: Width of the format, 32 or 64.
        largest: Largest finite value of the format (omega).
    """

    bits: int
    largest: float

    def __init__(self, bits: int) -> None:
        if bits == 64:
            self.largest = sys.float_info.max
        elif bits == 32:
            self.largest = float(np.finfo(np.float32).max)
        else:
            raise ScalarFormatError(f"Unsupported precision {bits}, use 32 or 64")
        self.bits = bits

    def __repr__(self) -> str:
        return f"FloatFormat(bits={self.bits})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FloatFormat) and other.bits == self.bits

    def __hash__(self) -> int:
        return hash(self.bits)

    def __deepcopy__(self, memo: Dict[int, Any]) -> "FloatFormat":
        return self

    def round_nearest(self, value: float) -> float:
        """Round a Python float to the nearest value of the format."""
        if self.bits == 64:
            return float(value)
        with np.errstate(over="ignore"):
            return float(np.float32(value))

    def next_up(self, value: float) -> float:
        """Return the successor of a value of the format."""
        if self.bits == 64:
            return math.nextafter(value, math.inf)
        with np.errstate(over="ignore"):
            return float(np.nextafter(np.float32(value), np.float32(np.inf)))

    def next_down(self, value: float) -> float:
        """Return the predecessor of a value of the format."""
        if self.bits == 64:
            return math.nextafter(value, -math.inf)
        with np.errstate(over="ignore"):
            return float(np.nextafter(np.float32(value), np.float32(-np.inf)))

    def is_representable(self, value: float) -> bool:
        """Return True if the value is finite and exactly representable."""
        return math.isfinite(value) and self.round_nearest(value) == value


BINARY32 = FloatFormat(32)
BINARY64 = FloatFormat(64)

# Largest finite binary64 value
LARGEST_FINITE: float = BINARY64.largest


def get_format(bits: int) -> FloatFormat:
    """Return the format matching a precision flag.

    Args:
        bits: 32 or 64.

    Raises:
        ScalarFormatError: If the precision is not supported.
    """
    if bits == 64:
        return BINARY64
    if bits == 32:
        return BINARY32
    raise ScalarFormatError(f"Unsupported precision {bits}, use 32 or 64")


def check_scalar(value: float, fmt: FloatFormat = BINARY64) -> float:
    """Check that a value is a finite scalar of the format and return it.

    Raises:
        ScalarFormatError: If the value is not finite or not representable.
    """
    if not fmt.is_representable(value):
        raise ScalarFormatError(
            f"{value!r} is not a finite {fmt.bits}-bit floating-point value"
        )
    return float(value)


def _check_operand(value: float) -> None:
    """Reject NaN and -inf, which round-up arithmetic never produces."""
    if math.isnan(value) or value == -math.inf:
        raise ScalarFormatError(f"Invalid operand {value!r}")


def _round_up_exact(exact: Fraction, fmt: FloatFormat) -> float:
    """Return the least value of the format that is not below `exact`."""
    if exact > fmt.largest:
        return math.inf
    if exact <= -fmt.largest:
        return -fmt.largest
    candidate = fmt.round_nearest(float(exact))
    while Fraction(candidate) < exact:
        candidate = fmt.next_up(candidate)
    while True:
        lower = fmt.next_down(candidate)
        if Fraction(lower) < exact:
            break
        candidate = lower
    # Turns -0.0 into 0.0
    return candidate + 0.0


def two_sum(a: float, b: float) -> Tuple[float, float]:
    """Return (x, y) with x = fl(a + b) and a + b = x + y exactly."""
    x = a + b
    b_virtual = x - a
    a_virtual = x - b_virtual
    return x, (a - a_virtual) + (b - b_virtual)


def fast_two_sum(a: float, b: float) -> Tuple[float, float]:
    """Same as `two_sum`, assuming |a| >= |b|."""
    x = a + b
    return x, b - (x - a)


def _split(a: float) -> Tuple[float, float]:
    c = _SPLITTER * a
    a_big = c - a
    a_hi = c - a_big
    return a_hi, a - a_hi


def two_product(a: float, b: float) -> Tuple[float, float]:
    """Return (x, y) with x = fl(a * b) and a * b = x + y exactly.

    Exact only when neither the split overflows nor the partial products
    underflow.
    """
    x = a * b
    a_hi, a_lo = _split(a)
    b_hi, b_lo = _split(b)
    err1 = x - a_hi * b_hi
    err2 = err1 - a_lo * b_hi
    err3 = err2 - a_hi * b_lo
    return x, a_lo * b_lo - err3


def ru_add(x: float, y: float, fmt: FloatFormat = BINARY64) -> float:
    """Return x + y rounded up.

    +inf is returned when the exact sum exceeds the largest finite value, or
    when an operand is already +inf.
    """
    _check_operand(x)
    _check_operand(y)
    if x == math.inf or y == math.inf:
        return math.inf
    if fmt.bits != 64:
        return _round_up_exact(Fraction(x) + Fraction(y), fmt)
    total, error = two_sum(x, y)
    if total == math.inf:
        return math.inf
    if total == -math.inf:
        return -fmt.largest
    if not math.isfinite(error):
        return _round_up_exact(Fraction(x) + Fraction(y), fmt)
    if error > 0:
        total = math.nextafter(total, math.inf)
    return total + 0.0


def ru_mul(x: float, y: float, fmt: FloatFormat = BINARY64) -> float:
    """Return x * y rounded up.

    A zero factor gives 0 even against +inf, which keeps products of
    coefficients with unbounded enclosures sound.
    """
    _check_operand(x)
    _check_operand(y)
    if x == 0 or y == 0:
        return 0.0
    if x == math.inf or y == math.inf:
        if x > 0 and y > 0:
            return math.inf
        raise ScalarFormatError("Round-up product of +inf by a negative value")
    if fmt.bits == 64:
        ax, ay = abs(x), abs(y)
        product = x * y
        if (
            _SPLIT_MIN < ax < _SPLIT_MAX
            and _SPLIT_MIN < ay < _SPLIT_MAX
            and _PRODUCT_MIN < abs(product) < _PRODUCT_MAX
        ):
            product, error = two_product(x, y)
            if error > 0:
                product = math.nextafter(product, math.inf)
            return product + 0.0
    return _round_up_exact(Fraction(x) * Fraction(y), fmt)


def ru_div(x: float, y: float, fmt: FloatFormat = BINARY64) -> float:
    """Return x / y rounded up.

    Round-down is obtained by callers as -ru_div(-x, y).

    Raises:
        ZeroDivisionError: If y is zero.
        ScalarFormatError: If an operand is not finite.
    """
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ScalarFormatError(f"Division operands must be finite: {x!r}, {y!r}")
    if y == 0:
        raise ZeroDivisionError("Round-up division by zero")
    return _round_up_exact(Fraction(x) / Fraction(y), fmt)


def grow_expansion(expansion: Sequence[float], b: float) -> List[float]:
    """Add a scalar to a nonoverlapping expansion, eliminating zeros."""
    result = []
    q = b
    for component in expansion:
        q, error = two_sum(q, component)
        if error:
            result.append(error)
    if q:
        result.append(q)
    return result


def expansion_sum(e: Sequence[float], f: Sequence[float]) -> List[float]:
    """Return the nonoverlapping expansion of the sum of two expansions."""
    result = list(e)
    for component in f:
        result = grow_expansion(result, component)
    return result


def scale_expansion(expansion: Sequence[float], b: float) -> List[float]:
    """Multiply a nonoverlapping expansion by a scalar, eliminating zeros."""
    if not expansion:
        return []
    result = []
    q, error = two_product(expansion[0], b)
    if error:
        result.append(error)
    for component in expansion[1:]:
        high, low = two_product(component, b)
        total, error = two_sum(q, low)
        if error:
            result.append(error)
        q, error = fast_two_sum(high, total)
        if error:
            result.append(error)
    if q:
        result.append(q)
    return result


def expansion_sign(expansion: Sequence[float]) -> Sign:
    """Return the sign of an expansion sorted by increasing magnitude."""
    for component in reversed(expansion):
        if component:
            return Sign.of(component)
    return Sign.ZERO


def _expansion_safe(value: float) -> bool:
    return value == 0 or _EXPANSION_MIN <= abs(value) <= _EXPANSION_MAX


def exact_sign_3x3(terms: Sequence[SignedTriple]) -> Sign:
    """Return the exact sign of a sum of signed triple products.

    Args:
        terms: Triples (sign, f1, f2, f3), standing for sign * f1 * f2 * f3,
            with sign in {-1, +1}.

    Returns:
        Sign of the exact sum.

    Raises:
        ScalarFormatError: If a factor is not finite.
    """
    for _, f1, f2, f3 in terms:
        if not (math.isfinite(f1) and math.isfinite(f2) and math.isfinite(f3)):
            raise ScalarFormatError("Exact sign factors must be finite")
    if all(
        _expansion_safe(f1) and _expansion_safe(f2) and _expansion_safe(f3)
        for _, f1, f2, f3 in terms
    ):
        expansion: List[float] = []
        for sign, f1, f2, f3 in terms:
            if sign == 0 or f1 == 0 or f2 == 0 or f3 == 0:
                continue
            high, low = two_product(f1, f2)
            pair = [component for component in (low, high) if component]
            scaled = scale_expansion(pair, f3 if sign > 0 else -f3)
            expansion = expansion_sum(expansion, scaled)
        return expansion_sign(expansion)
    LOGGER.debug("Factors out of the expansion range, using rational arithmetic")
    total = sum(
        (
            Fraction(sign) * Fraction(f1) * Fraction(f2) * Fraction(f3)
            for sign, f1, f2, f3 in terms
        ),
        Fraction(0),
    )
    return Sign.of(total)
