"""Aumann integration as the hull of integrated selections.

The selection fan is {support_selection(F, d) : d in the grid} plus the
Steiner selection. Each selection is integrated componentwise by adaptive
Simpson with tolerance ε/4. The hull P of the integrals lies inside the
integral C; C lies inside the grid polytope Q of P's own support values, so
h(P, C) ≤ h(P, Q) up to quadrature error.
"""

from __future__ import annotations

import logging

import numpy as np

from domain import IntervalSet
from geometry import ConvexBody, canonicalize, embed, hausdorff_distance, reconstruct
from geometry.embedding import DirectionGrid, direction_grid
from integrators.quadrature import QuadratureResult, domain_pieces, integrate_pieces
from integrators.results import IntegralResult, Tolerances, TracePoint
from integrators.riemann import empty_result
from multifunctions import Multifunction, steiner_selection
from shared.enums import Method
from shared.errors import NoConvergenceError, UnsupportedDimensionError
from shared.parallel import chunked, ordered_map

logger = logging.getLogger(__name__)

FAN_CHUNK = 64


def fan_integrals(
    F: Multifunction, A: IntervalSet, grid: DirectionGrid, tol: float, workers: int = 1
) -> tuple[np.ndarray, np.ndarray, int]:
    """Integrals of the fan selections, one row per grid direction plus the
    Steiner row last, with per-row error bounds and the evaluation count."""
    pieces = domain_pieces(A, F.jumps)
    steiner = steiner_selection(F)
    units: list[range | None] = [*chunked(len(grid.directions), FAN_CHUNK), None]

    def run(unit: range | None) -> QuadratureResult:
        if unit is None:
            return integrate_pieces(steiner.points, pieces, tol)
        dirs = grid.directions[unit.start : unit.stop]
        return integrate_pieces(
            lambda ts: F.support_points(dirs, ts).reshape(len(ts), -1), pieces, tol
        )

    parts = ordered_map(run, units, workers)
    points = np.concatenate([p.values.reshape(-1, F.dim) for p in parts])
    errors = np.concatenate([p.errors.reshape(-1, F.dim) for p in parts])
    return points, np.linalg.norm(errors, axis=1), sum(p.evaluations for p in parts)


def aumann_integrate(
    F: Multifunction, A: IntervalSet, tol: Tolerances, workers: int = 1
) -> IntegralResult:
    """(A)∫_A F dμ approximated from inside by the selection fan.

    Raises:
        UnsupportedDimensionError: For dim 3.
        NoConvergenceError: If a selection integral misses ε/4.
    """
    if F.dim > 2:
        raise UnsupportedDimensionError("the Aumann fan is implemented for dim ≤ 2")
    grid = direction_grid(F.dim, tol.directions)
    if A.is_empty:
        return empty_result(F, grid, Method.AUMANN)
    budget = tol.epsilon_target / 4.0
    points, errors, evaluations = fan_integrals(F, A, grid, budget, workers)
    quad_error = float(errors.max())
    if quad_error > budget:
        raise NoConvergenceError(
            f"aumann selection quadrature error {quad_error:.3e} exceeds {budget:.3e}",
            method=str(Method.AUMANN),
            trace=(TracePoint(grid.resolution, None, quad_error, evaluations, "quadrature"),),
        )
    value = canonicalize(points)
    deficit = fan_deficit(value, grid)
    realization = F.realization_error * A.measure
    estimate = deficit + 2.0 * quad_error + realization
    logger.info(
        "aumann on %s: %d selections, deficit %.3e, %d evaluations",
        F.name,
        len(points),
        deficit,
        evaluations,
    )
    return IntegralResult(
        value=value,
        method=Method.AUMANN,
        error_estimate=estimate,
        trace=(TracePoint(grid.resolution, None, estimate, evaluations),),
        evaluations=evaluations,
        grid=grid,
        intermediates=(value,),
        details={
            "quadrature_error": quad_error,
            "fan_deficit": deficit,
            "realization_error": realization,
            "selections": float(len(points)),
        },
    )


def fan_deficit(P: ConvexBody, grid: DirectionGrid) -> float:
    """h(P, Q) with Q the grid polytope of P's support values."""
    return hausdorff_distance(P, reconstruct(embed(P, grid)))
