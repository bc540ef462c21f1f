"""Riemann–Minkowski sums Σ μ(Eᵢ ∩ A)·F(tᵢ), exact and embedded."""

from __future__ import annotations

import logging
from collections.abc import Callable

import numpy as np

from domain import IntervalSet
from geometry import ConvexBody, hausdorff_distance, minkowski_combination, origin
from geometry.embedding import DirectionGrid
from integrators.results import IntegralResult, LevelOutcome, Tolerances, TracePoint
from multifunctions import Multifunction
from shared.enums import Method
from shared.errors import NoConvergenceError

logger = logging.getLogger(__name__)


def jump_sizes(F: Multifunction) -> dict[float, float]:
    """h(F(j⁻), F(j)) for every declared jump j, with j⁻ one ulp to the left."""
    return {j: hausdorff_distance(F(np.nextafter(j, -np.inf)), F(j)) for j in F.jumps}


def embedded_sum(
    F: Multifunction, grid: DirectionGrid, weights: np.ndarray, tags: np.ndarray
) -> tuple[np.ndarray, int]:
    """Support vector of the sum on ``grid`` and the number of F evaluations.

    Cells of zero weight are skipped.
    """
    keep = weights > 0
    if not keep.any():
        return np.zeros(len(grid.directions)), 0
    values = F.embedded(grid, tags[keep])
    return weights[keep] @ values, int(keep.sum())


def exact_sum(F: Multifunction, weights: np.ndarray, tags: np.ndarray) -> tuple[ConvexBody, int]:
    """The sum as a body, with the number of F evaluations."""
    keep = np.flatnonzero(weights > 0)
    if keep.size == 0:
        return origin(F.dim), 0
    bodies = [F(tags[i]) for i in keep]
    return minkowski_combination(bodies, weights[keep]), int(keep.size)


def spread(samples: np.ndarray) -> float:
    """max over pairs of sampled support vectors of their sup-norm distance."""
    if len(samples) < 2:
        return 0.0
    return float(np.max(samples.max(axis=0) - samples.min(axis=0)))


def seed_for(seed: int, *path: int) -> int:
    """A child seed for (seed, *path), independent of evaluation order."""
    return int(np.random.SeedSequence([seed, *path]).generate_state(1)[0])


def empty_result(F: Multifunction, grid: DirectionGrid, method: Method) -> IntegralResult:
    """∫ over the empty set: exactly {0}, no evaluations."""
    return IntegralResult(origin(F.dim), method, 0.0, (), 0, grid)


def run_levels(
    method: Method,
    level: Callable[[int], LevelOutcome],
    F: Multifunction,
    A: IntervalSet,
    grid: DirectionGrid,
    tol: Tolerances,
    start: int = 0,
) -> IntegralResult:
    """Iterate ``level`` over k = start..max_depth until its estimate meets ε.

    The reported estimate is the level's stopping quantity, raised to the
    last measured successive distance if larger, plus the realization error
    over A.

    Raises:
        NoConvergenceError: If no level up to ``max_depth`` meets ε.
    """
    trace: list[TracePoint] = []
    values: list[ConvexBody] = []
    evaluations = 0
    realization = F.realization_error * A.measure
    result: IntegralResult | None = None
    rigorous = True
    for k in range(min(start, tol.max_depth), tol.max_depth + 1):
        out = level(k)
        evaluations += out.evaluations
        rigorous = rigorous and out.rigorous
        h_prev = hausdorff_distance(values[-1], out.value) if values else None
        estimate = max(out.estimate, h_prev or 0.0) + realization
        note = "" if out.rigorous else "sampled"
        trace.append(TracePoint(k, h_prev, estimate, evaluations, note))
        values.append(out.value)
        result = IntegralResult(
            value=out.value,
            method=method,
            error_estimate=estimate,
            trace=tuple(trace),
            evaluations=evaluations,
            grid=grid,
            rigorous=rigorous,
            intermediates=tuple(values),
            details={**out.details, "realization_error": realization},
        )
        logger.debug(
            "%s level %d: estimate %.3e after %d evaluations", method, k, out.estimate, evaluations
        )
        if out.estimate <= tol.epsilon_target:
            logger.info(
                "%s converged at level %d: estimate %.3e, %d evaluations",
                method,
                k,
                estimate,
                evaluations,
            )
            return result
    raise NoConvergenceError(
        f"{method} did not reach ε = {tol.epsilon_target:g} within depth {tol.max_depth}",
        method=str(method),
        trace=trace,
        partial=result,
    )
