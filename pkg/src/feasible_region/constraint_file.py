"""Read and write constraint files.

A constraint file holds a header line `box MX MY` followed by one
constraint `A B C`, standing for A*x + B*y >= C, per line. Values are
decimal or hexadecimal floating-point literals and `#` starts a comment:

    # square with a diagonal cut
    box 10 10
    1 1 5

Hexadecimal literals are read bit-exactly, decimal literals are rounded to
the nearest value of the selected precision.
"""

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional

from feasible_region.engine.constraint_normalizer import RawConstraint
from feasible_region.engine.rounding_kernel import BINARY64, FloatFormat

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())


class ConstraintFileError(Exception):
    """Exception raised when a constraint file is invalid."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        location = f"line {line}: " if line is not None else ""
        self.message = f"The constraint file is invalid - {location}{message}"
        self.line = line
        super().__init__(self.message)


@dataclass
class ConstraintSystem:
    """Start box and constraints of a constraint file."""

    mx: float
    my: float
    constraints: List[RawConstraint] = field(default_factory=list)


def parse_scalar(token: str, fmt: FloatFormat = BINARY64) -> float:
    """Parse a decimal or hexadecimal literal into a scalar of the format.

    Raises:
        ValueError: If the token is not a finite literal, or if a hexadecimal
            literal is not exactly representable.
    """
    if "0x" in token.lower():
        value = float.fromhex(token)
        if not math.isfinite(value) or fmt.round_nearest(value) != value:
            raise ValueError(f"{token} is not a {fmt.bits}-bit value")
        return value
    value = fmt.round_nearest(float(token))
    if not math.isfinite(value):
        raise ValueError(f"{token} is not a finite {fmt.bits}-bit value")
    if fmt != BINARY64:
        # Rounding through binary64 first can land on a tie of the format
        exact = Fraction(token)
        for neighbor in (fmt.next_down(value), fmt.next_up(value)):
            if math.isfinite(neighbor) and abs(Fraction(neighbor) - exact) < abs(
                Fraction(value) - exact
            ):
                return neighbor
    return value


def parse_constraints(text: str, fmt: FloatFormat = BINARY64) -> ConstraintSystem:
    """Parse the content of a constraint file.

    Raises:
        ConstraintFileError: If the content is invalid.
    """
    system: Optional[ConstraintSystem] = None
    for number, raw_line in enumerate(text.splitlines(), start=1):
        tokens = raw_line.split("#", 1)[0].split()
        if not tokens:
            continue
        try:
            if tokens[0].lower() == "box":
                if system is not None:
                    raise ConstraintFileError("duplicate box header", number)
                if len(tokens) != 3:
                    raise ConstraintFileError("expected 'box MX MY'", number)
                system = ConstraintSystem(
                    parse_scalar(tokens[1], fmt), parse_scalar(tokens[2], fmt)
                )
                continue
            if system is None:
                raise ConstraintFileError("the box header must come first", number)
            if len(tokens) != 3:
                raise ConstraintFileError(
                    f"expected 3 values 'A B C', got {len(tokens)}", number
                )
            a, b, c = (parse_scalar(token, fmt) for token in tokens)
        except ValueError as err:
            raise ConstraintFileError(str(err), number) from err
        system.constraints.append(RawConstraint(a, b, c))
    if system is None:
        raise ConstraintFileError("missing box header")
    return system


def load_constraint_file(
    filename: str, fmt: FloatFormat = BINARY64
) -> ConstraintSystem:
    """Read a constraint file.

    Raises:
        ConstraintFileError: If the file is invalid.
    """
    LOGGER.debug("Reading the constraint file %s", filename)
    try:
        with open(filename, "r", encoding="utf-8") as stream:
            content = stream.read()
    except OSError as err:
        raise ConstraintFileError(f"cannot read {filename} ({err.strerror})") from err
    return parse_constraints(content, fmt)


def format_constraints(system: ConstraintSystem, comment: Optional[str] = None) -> str:
    """Return the content of a constraint file with hexadecimal literals."""
    lines = []
    if comment:
        lines.append(f"# {comment}")
    lines.append(f"box {system.mx.hex()} {system.my.hex()}")
    for rc in system.constraints:
        lines.append(f"{float(rc.a).hex()} {float(rc.b).hex()} {float(rc.c).hex()}")
    return "\n".join(lines) + "\n"


def write_constraint_file(
    filename: str, system: ConstraintSystem, comment: Optional[str] = None
) -> None:
    """Write a constraint file with hexadecimal literals."""
    with open(filename, "w", encoding="utf-8") as stream:
        stream.write(format_constraints(system, comment))
