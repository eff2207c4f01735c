"""Differential verification of the clipping engine against the oracle."""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from feasible_region import config, utils
from feasible_region.engine.clip_engine import FeasibleRegion, RegionKind, new_box
from feasible_region.engine.constraint_normalizer import RawConstraint
from feasible_region.engine.rounding_kernel import FloatFormat
from feasible_region.verification import oracle
from feasible_region.verification.corpus import Corpus, CorpusCase

LOGGER = logging.getLogger(__name__)
LOGGER.addHandler(logging.NullHandler())


@dataclass
class CaseResult:
    """Outcome of the verification of a case.

    Attributes:
        name: Case name.
        kind: Expected shape.
        failures: Description of each failed check.
        steps: Number of constraint insertions checked against the oracle.
        probes: Number of probe insertions checked.
        max_divisions: Largest number of divisions made by one insertion.
    """

    name: str
    kind: RegionKind
    failures: List[str] = field(default_factory=list)
    steps: int = 0
    probes: int = 0
    max_divisions: int = 0

    @property
    def passed(self) -> bool:
        """True if no check failed."""
        return not self.failures


def _check_step(
    result: CaseResult,
    label: str,
    region: FeasibleRegion,
    exact: oracle.RationalPolygon,
    require_match: bool,
) -> None:
    """Record the failures of a region compared with the exact set."""
    violation = region.check_invariants()
    if violation:
        result.failures.append(f"{label}: {violation}")
        return
    comparison = oracle.compare(region.snapshot(), exact)
    if not comparison.contains_exact:
        result.failures.append(f"{label}: the region misses exact points")
    if region.kind == RegionKind.EMPTY and exact.kind != RegionKind.EMPTY:
        result.failures.append(f"{label}: the region is wrongly empty")
    if require_match:
        if region.kind != exact.kind:
            result.failures.append(
                f"{label}: {region.kind.value} instead of {exact.kind.value}"
            )
        elif not comparison.exact_match:
            result.failures.append(f"{label}: vertices differ from the exact ones")


def _insert(
    result: CaseResult, region: FeasibleRegion, rc: RawConstraint
) -> None:
    divisions = region.counters.divisions
    region.add_constraint(rc)
    spent = region.counters.divisions - divisions
    result.max_divisions = max(result.max_divisions, spent)
    if spent > 2:
        result.failures.append(f"{rc}: {spent} divisions")


def verify_case(
    case: CorpusCase, fmt: FloatFormat, probe_budget: int = 0
) -> CaseResult:
    """Clip a case in each insertion order and try its probes.

    Every intermediate region must contain the exact set of the constraints
    inserted so far. The final region must match the expected set exactly,
    and every probe must give a region of the exact kind that contains the
    exact set.

    Args:
        case: Case to verify.
        fmt: Binary format of the scalars.
        probe_budget: Largest number of probes to try, 0 for all.
    """
    result = CaseResult(case.name, case.kind)
    box = (case.system.mx, case.system.my)
    expected = case.expected()
    final: Optional[FeasibleRegion] = None
    for number, order in enumerate(case.orders):
        region = new_box(box[0], box[1], fmt)
        inserted: List[RawConstraint] = []
        for index in order:
            rc = case.system.constraints[index]
            _insert(result, region, rc)
            inserted.append(rc)
            exact = oracle.exact_intersection(inserted, box)
            _check_step(result, f"order {number}, {rc}", region, exact, True)
            result.steps += 1
        _check_step(result, f"order {number}, final", region, expected, True)
        if final is None:
            final = region
    if final is None or result.failures:
        return result

    probes = case.probes[:probe_budget] if probe_budget else case.probes
    for rc in probes:
        region = final.copy()
        _insert(result, region, rc)
        exact = oracle.exact_intersection(case.system.constraints + [rc], box)
        _check_step(result, f"probe {rc}", region, exact, True)
        result.probes += 1
    LOGGER.debug(
        "Case %s: %d steps, %d probes, %d failures",
        case.name,
        result.steps,
        result.probes,
        len(result.failures),
    )
    return result


def verify_corpus(
    corpus: Corpus,
    probe_budget: int = 0,
    workers: int = config.DEFAULT_CONCURRENT_WORKERS,
) -> List[CaseResult]:
    """Verify all cases of a corpus using concurrent threads."""
    results: List[CaseResult] = []

    def verify(case: CorpusCase) -> None:
        results.append(verify_case(case, corpus.fmt, probe_budget))

    utils.exec_multithread(corpus.cases, verify, workers)
    results.sort(key=lambda result: result.name)
    return results


def summarize(results: List[CaseResult]) -> Dict[str, Any]:
    """Return the JSON summary of a verification."""
    failed = [result for result in results if not result.passed]
    return {
        "Passed": not failed,
        "Cases": len(results),
        "FailedCases": len(failed),
        "Steps": sum(result.steps for result in results),
        "ProbeInsertions": sum(result.probes for result in results),
        "MaxDivisionsPerConstraint": max(
            (result.max_divisions for result in results), default=0
        ),
        "Failures": {result.name: result.failures for result in failed},
    }
