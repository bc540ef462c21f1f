"""Cross-integrator comparison: the equivalence checks as a report.

McShane, Birkhoff and Pettis values are compared symmetrically. Aumann is an
inner approximation, so its pairs are checked one-sidedly by the directed
distance from the Aumann body. A pair is a VIOLATION when its distance
exceeds twice the sum of the two error estimates plus a roundoff floor.
"""

from __future__ import annotations

import itertools
import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

from domain import IntervalSet
from geometry import directed_distance, hausdorff_distance
from integrators.aumann import aumann_integrate
from integrators.birkhoff import birkhoff_integrate
from integrators.mcshane import mcshane_integrate
from integrators.pettis import pettis_integrate
from integrators.results import IntegralResult, Tolerances
from multifunctions import Multifunction
from shared.enums import Method
from shared.errors import NoConvergenceError, SetIntError, UnsupportedDimensionError

logger = logging.getLogger(__name__)

VIOLATION_FACTOR = 2.0
# Distances below this are roundoff, even between two exact results.
VIOLATION_FLOOR = 1e-12
# Coarsest fan of the refinement ladder.
FAN_LADDER_START = 16

INTEGRATORS: dict[Method, Callable[..., IntegralResult]] = {
    Method.MCSHANE: mcshane_integrate,
    Method.BIRKHOFF: birkhoff_integrate,
    Method.PETTIS: pettis_integrate,
    Method.AUMANN: aumann_integrate,
}


@dataclass(frozen=True)
class PairCheck:
    first: Method
    second: Method
    distance: float
    checked_distance: float
    combined_estimate: float
    one_sided: bool

    @property
    def violation(self) -> bool:
        return self.checked_distance > VIOLATION_FACTOR * self.combined_estimate + VIOLATION_FLOOR

    def to_dict(self) -> dict[str, Any]:
        return {
            "pair": [str(self.first), str(self.second)],
            "distance": self.distance,
            "checked_distance": self.checked_distance,
            "combined_estimate": self.combined_estimate,
            "one_sided": self.one_sided,
            "violation": self.violation,
        }


@dataclass(frozen=True)
class FanRung:
    directions: int
    distance_to_pettis: float

    def to_dict(self) -> dict[str, Any]:
        return {"m": self.directions, "h_to_pettis": self.distance_to_pettis}


@dataclass(frozen=True)
class ComparisonReport:
    results: dict[Method, IntegralResult]
    pairs: tuple[PairCheck, ...]
    failures: dict[Method, str] = field(default_factory=dict)
    non_converged: tuple[Method, ...] = ()
    fan_ladder: tuple[FanRung, ...] = ()

    @property
    def violations(self) -> tuple[PairCheck, ...]:
        return tuple(p for p in self.pairs if p.violation)

    @property
    def fan_monotone(self) -> bool:
        """Fan distances to the Pettis value do not grow by more than 10% per doubling."""
        return all(
            b.distance_to_pettis <= 1.1 * a.distance_to_pettis + 1e-12
            for a, b in itertools.pairwise(self.fan_ladder)
        )

    def matrix(self) -> list[list[float | None]]:
        """4×4 pairwise Hausdorff distances in ``Method`` order; None where a run failed."""
        methods = list(Method)
        out: list[list[float | None]] = [[None] * 4 for _ in methods]
        for m in methods:
            if m in self.results:
                out[methods.index(m)][methods.index(m)] = 0.0
        for p in self.pairs:
            i, j = methods.index(p.first), methods.index(p.second)
            out[i][j] = out[j][i] = p.distance
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "methods": [str(m) for m in Method],
            "matrix": self.matrix(),
            "pairs": [p.to_dict() for p in self.pairs],
            "violations": len(self.violations),
            "results": {str(m): r.to_dict() for m, r in self.results.items()},
            "failures": {str(m): msg for m, msg in self.failures.items()},
            "non_converged": [str(m) for m in self.non_converged],
            "fan_ladder": [r.to_dict() for r in self.fan_ladder],
            "fan_monotone": self.fan_monotone,
        }


def check_pairs(results: Mapping[Method, IntegralResult]) -> tuple[PairCheck, ...]:
    """Pairwise checks among the available results, in ``Method`` order."""
    available = [m for m in Method if m in results]
    checks = []
    for a, b in itertools.combinations(available, 2):
        ra, rb = results[a], results[b]
        distance = hausdorff_distance(ra.value, rb.value)
        one_sided = Method.AUMANN in (a, b)
        if one_sided:
            inner, outer = (ra, rb) if a == Method.AUMANN else (rb, ra)
            checked = directed_distance(inner.value, outer.value)
        else:
            checked = distance
        checks.append(
            PairCheck(a, b, distance, checked, ra.error_estimate + rb.error_estimate, one_sided)
        )
    return tuple(checks)


def fan_ladder_sizes(m: int) -> list[int]:
    """Fan sizes compared with the Pettis value, ascending.

    Halves ``m`` while it stays even and at least 16; a grid too coarse for
    that gets the single rung m/2.
    """
    sizes = [m]
    while sizes[-1] % 2 == 0 and sizes[-1] // 2 >= FAN_LADDER_START:
        sizes.append(sizes[-1] // 2)
    if len(sizes) == 1 and m // 2 >= 3:
        sizes.append(m // 2)
    return sorted(sizes)


def _fan_ladder(
    F: Multifunction, A: IntervalSet, tol: Tolerances, pettis: IntegralResult, workers: int
) -> tuple[FanRung, ...]:
    if F.dim != 2 or tol.directions // 2 < 3:
        return ()
    rungs = []
    for m in fan_ladder_sizes(tol.directions):
        try:
            fan = aumann_integrate(F, A, tol.model_copy(update={"directions": m}), workers)
        except SetIntError as e:
            logger.warning("fan ladder at m=%d skipped: %s", m, e)
            return tuple(rungs)
        rungs.append(FanRung(m, hausdorff_distance(fan.value, pettis.value)))
    return tuple(rungs)


def compare_all(
    F: Multifunction,
    A: IntervalSet,
    tol: Tolerances,
    workers: int = 1,
    methods: tuple[Method, ...] = tuple(Method),
) -> ComparisonReport:
    """Run the requested integrators and check every pair.

    A run that fails to converge contributes its partial result when it has
    one; other failures are recorded and leave the remaining pairs intact.
    """
    results: dict[Method, IntegralResult] = {}
    failures: dict[Method, str] = {}
    non_converged: list[Method] = []
    for method in methods:
        try:
            results[method] = INTEGRATORS[method](F, A, tol, workers)
        except NoConvergenceError as e:
            logger.warning("%s did not converge: %s", method, e)
            non_converged.append(method)
            failures[method] = str(e)
            if e.partial is not None:
                results[method] = e.partial
        except UnsupportedDimensionError as e:
            failures[method] = str(e)
        except SetIntError as e:
            logger.error("%s failed: %s", method, e)
            failures[method] = str(e)

    pairs = check_pairs(results)
    ladder: tuple[FanRung, ...] = ()
    if Method.AUMANN in results and Method.PETTIS in results:
        ladder = _fan_ladder(F, A, tol, results[Method.PETTIS], workers)
    report = ComparisonReport(results, pairs, failures, tuple(non_converged), ladder)
    for p in report.violations:
        logger.warning(
            "VIOLATION %s vs %s: %.3e > %.1f × %.3e",
            p.first,
            p.second,
            p.checked_distance,
            VIOLATION_FACTOR,
            p.combined_estimate,
        )
    return report
