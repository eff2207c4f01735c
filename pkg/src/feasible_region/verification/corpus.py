"""Write and read test corpora.

A corpus is a directory holding a YAML manifest and, for each case, a
constraint file and a probe file. The manifest lists the expected exact
vertices and the insertion orders of each case.
"""

import logging
import os
import random
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import yaml

from feasible_region import config, schema
from feasible_region.constraint_file import (
    ConstraintFileError,
    ConstraintSystem,
    load_constraint_file,
    write_constraint_file,
)
from feasible_region.engine.clip_engine import RegionKind
from feasible_region.engine.constraint_normalizer import RawConstraint
from feasible_region.engine.rounding_kernel import FloatFormat, get_format
from feasible_region.verification import testgen
from feasible_region.verification.oracle import RationalPolygon

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())


class CorpusError(Exception):
    """Exception raised when a corpus is invalid."""

    def __init__(self, message: Any) -> None:
        self.message = f"The test corpus is invalid - {message}"
        super().__init__(self.message)


@dataclass
class CorpusCase:
    """Test case of a corpus.

    Attributes:
        name: Case name, unique in the corpus.
        kind: Expected shape of the exact feasible set.
        system: Start box and constraints.
        probes: Constraints tried one at a time on the clipped region.
        orders: Insertion orders of the constraints.
        vertices: Exact integer vertices, counter-clockwise.
    """

    name: str
    kind: RegionKind
    system: ConstraintSystem
    probes: List[RawConstraint] = field(default_factory=list)
    orders: List[List[int]] = field(default_factory=list)
    vertices: List[Tuple[int, int]] = field(default_factory=list)

    def expected(self) -> RationalPolygon:
        """Return the exact feasible set."""
        return RationalPolygon.from_points(self.vertices)


@dataclass
class Corpus:
    """Test corpus loaded from a directory."""

    fmt: FloatFormat
    seed: int
    beta: int
    cases: List[CorpusCase] = field(default_factory=list)


def _probes_for(
    vertices: List[Tuple[int, int]],
    beta: int,
    probe_set: int,
    rng: random.Random,
) -> List[RawConstraint]:
    probes: List[RawConstraint] = []
    if not vertices:
        return probes
    for nu in testgen.normal_set(probe_set):
        probes.extend(testgen.probe_constraints(vertices, nu, beta, rng))
    return probes


def generate_cases(
    fmt: FloatFormat,
    beta: int,
    seed: int,
    budget: int = config.DEFAULT_CORPUS_BUDGET,
    degenerate: int = config.DEFAULT_DEGENERATE_CASES,
    orders: int = config.DEFAULT_ORDERS,
    probe_set: int = config.DEFAULT_PROBE_SET,
    exhaustive_size: int = 0,
) -> List[CorpusCase]:
    """Generate the cases of a corpus. The seed fully determines the result.

    Args:
        fmt: Binary format of the scalars.
        beta: Size parameter of the generated polygons.
        seed: Seed of the random generator.
        budget: Number of polygons built from random valid subsets.
        degenerate: Number of cases per degenerate kind.
        orders: Insertion orders per case.
        probe_set: Size of the normal set of the probes, 32 or 64.
        exhaustive_size: Build a polygon for every valid subset with at most
            this many normals, 0 to disable.

    Raises:
        GeneratorError: If beta does not fit the format.
    """
    testgen.check_beta(beta, fmt)
    if exhaustive_size > config.MAX_EXHAUSTIVE_SUBSET_SIZE:
        raise testgen.GeneratorError(
            f"Exhaustive enumeration is limited to subsets of"
            f" {config.MAX_EXHAUSTIVE_SUBSET_SIZE} normals"
        )
    rng = random.Random(seed)
    side = testgen.start_box_side(beta)
    normals = testgen.normal_set()
    subsets = list(testgen.valid_subsets(normals, exhaustive_size))
    subsets += testgen.sample_valid_subsets(normals, budget, rng)

    cases = []
    for index, subset in enumerate(subsets):
        polygon = testgen.build_polygon(subset, beta, rng)
        vertices = list(polygon.vertices)
        cases.append(
            CorpusCase(
                name=f"polygon-{index:04d}",
                kind=RegionKind.POLYGON,
                system=ConstraintSystem(side, side, polygon.raw_constraints()),
                probes=_probes_for(vertices, beta, probe_set, rng),
                orders=testgen.random_orders(orders, len(vertices), rng),
                vertices=vertices,
            )
        )
    for kind in (RegionKind.POINT, RegionKind.SEGMENT, RegionKind.EMPTY):
        for index in range(degenerate):
            generated = testgen.gen_degenerate(kind, beta, rng)
            cases.append(
                CorpusCase(
                    name=f"{kind.value}-{index:04d}",
                    kind=kind,
                    system=ConstraintSystem(side, side, generated.constraints),
                    probes=_probes_for(generated.vertices, beta, probe_set, rng),
                    orders=testgen.random_orders(
                        orders, len(generated.constraints), rng
                    ),
                    vertices=generated.vertices,
                )
            )
    LOGGER.debug("Generated %d cases with seed %d", len(cases), seed)
    return cases


def write_corpus(
    directory: str, fmt: FloatFormat, beta: int, seed: int, cases: List[CorpusCase]
) -> str:
    """Write a corpus and return the path of its manifest."""
    os.makedirs(directory, exist_ok=True)
    manifest: Dict[str, Any] = {
        "Precision": fmt.bits,
        "Seed": seed,
        "Beta": beta,
        "Cases": [],
    }
    for case in cases:
        constraint_file = f"{case.name}.txt"
        write_constraint_file(
            os.path.join(directory, constraint_file), case.system, case.name
        )
        entry: Dict[str, Any] = {
            "Name": case.name,
            "Kind": case.kind.value,
            "ConstraintFile": constraint_file,
            "Orders": case.orders,
            "Vertices": [[x, y] for x, y in case.vertices],
        }
        if case.probes:
            probe_file = f"{case.name}.probes.txt"
            write_constraint_file(
                os.path.join(directory, probe_file),
                ConstraintSystem(case.system.mx, case.system.my, case.probes),
                f"probes of {case.name}",
            )
            entry["ProbeFile"] = probe_file
        manifest["Cases"].append(entry)
    manifest_path = os.path.join(directory, config.MANIFEST_FILENAME)
    with open(manifest_path, "w", encoding="utf-8") as stream:
        yaml.safe_dump(manifest, stream, sort_keys=False)
    LOGGER.info("Wrote %d cases to %s", len(cases), directory)
    return manifest_path


def load_corpus(directory: str) -> Corpus:
    """Read a corpus.

    Raises:
        CorpusError: If the manifest or a case file is invalid.
    """
    # pylint: disable=broad-exception-caught
    manifest_path = os.path.join(directory, config.MANIFEST_FILENAME)
    try:
        with open(manifest_path, "r", encoding="utf-8") as stream:
            manifest = yaml.safe_load(stream)
        schema.validate_manifest(manifest)
    except Exception as err:
        raise CorpusError(err) from err

    fmt = get_format(manifest["Precision"])
    corpus = Corpus(fmt, manifest["Seed"], manifest["Beta"])
    for entry in manifest["Cases"]:
        try:
            system = load_constraint_file(
                os.path.join(directory, entry["ConstraintFile"]), fmt
            )
            probes = []
            if "ProbeFile" in entry:
                probes = load_constraint_file(
                    os.path.join(directory, entry["ProbeFile"]), fmt
                ).constraints
        except (OSError, ConstraintFileError) as err:
            raise CorpusError(f"case {entry['Name']}: {err}") from err
        orders = entry.get("Orders") or [list(range(len(system.constraints)))]
        for order in orders:
            if sorted(order) != list(range(len(system.constraints))):
                raise CorpusError(f"case {entry['Name']}: invalid insertion order")
        corpus.cases.append(
            CorpusCase(
                name=entry["Name"],
                kind=RegionKind(entry["Kind"]),
                system=system,
                probes=probes,
                orders=orders,
                vertices=[(x, y) for x, y in entry["Vertices"]],
            )
        )
    LOGGER.debug("Loaded %d cases from %s", len(corpus.cases), directory)
    return corpus
