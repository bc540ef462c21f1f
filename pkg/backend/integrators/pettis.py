"""Multivalued Pettis integration through the support-function identity.

For each grid direction d, I_d = ∫_A δ*(d, F(t)) dt by adaptive Simpson with
tolerance ε/(4m), breaking at the jumps of F. The value is the body cut out by
the half-planes ⟨d, x⟩ ≤ I_d.
"""

from __future__ import annotations

import logging

import numpy as np

from domain import IntervalSet
from geometry import embed, reconstruct, reconstruction_deficit, sup_norm_distance
from geometry.embedding import SupportVector, consistency_tolerance, direction_grid
from integrators.quadrature import QuadratureResult, domain_pieces, integrate_pieces
from integrators.results import IntegralResult, Tolerances, TracePoint
from integrators.riemann import empty_result
from multifunctions import Multifunction
from shared.enums import Method
from shared.errors import NoConvergenceError
from shared.parallel import chunked, ordered_map

logger = logging.getLogger(__name__)

# Directions per quadrature batch; fixed so results never depend on the worker count.
DIRECTION_CHUNK = 64


def support_integrals(
    F: Multifunction, A: IntervalSet, directions: np.ndarray, tol: float, workers: int = 1
) -> QuadratureResult:
    """∫_A δ*(d, F(t)) dt for every row d of ``directions``, each within ``tol``."""
    pieces = domain_pieces(A, F.jumps)

    def run(chunk: range) -> QuadratureResult:
        dirs = directions[chunk.start : chunk.stop]
        return integrate_pieces(lambda ts: F.support_values(dirs, ts), pieces, tol)

    parts = ordered_map(run, chunked(len(directions), DIRECTION_CHUNK), workers)
    return QuadratureResult(
        np.concatenate([p.values for p in parts]),
        np.concatenate([p.errors for p in parts]),
        sum(p.evaluations for p in parts),
        max(p.depth for p in parts),
    )


def pettis_integrate(
    F: Multifunction, A: IntervalSet, tol: Tolerances, workers: int = 1
) -> IntegralResult:
    """(P)∫_A F dμ on the m-direction grid.

    The estimate adds the quadrature error, the reconstruction deficit of the
    support vector, the re-embedding deviation and the realization error.

    Raises:
        NoConvergenceError: If some direction misses its quadrature tolerance.
        InconsistentSupportError: If the integrated vector is not a support
            vector within the quadrature error.
    """
    grid = direction_grid(F.dim, tol.directions)
    if A.is_empty:
        return empty_result(F, grid, Method.PETTIS)
    m = len(grid.directions)
    per_direction = tol.epsilon_target / (4.0 * m)
    quad = support_integrals(F, A, grid.directions, per_direction, workers)
    quad_error = float(quad.errors.max())
    s = SupportVector(grid, quad.values)
    realization = F.realization_error * A.measure
    if quad_error > per_direction:
        trace = (TracePoint(m, None, quad_error, quad.evaluations, "quadrature"),)
        raise NoConvergenceError(
            f"pettis quadrature error {quad_error:.3e} exceeds {per_direction:.3e}",
            method=str(Method.PETTIS),
            trace=trace,
        )

    value = reconstruct(s, tolerance=max(consistency_tolerance(s), 2.0 * quad_error))
    deviation = sup_norm_distance(embed(value, grid), s)
    deficit = reconstruction_deficit(s)
    estimate = quad_error + deficit + deviation + realization
    logger.info(
        "pettis on %s: m=%d, quadrature %.3e, deficit %.3e, %d evaluations",
        F.name,
        m,
        quad_error,
        deficit,
        quad.evaluations,
    )
    return IntegralResult(
        value=value,
        method=Method.PETTIS,
        error_estimate=estimate,
        trace=(TracePoint(m, None, estimate, quad.evaluations),),
        evaluations=quad.evaluations,
        grid=grid,
        intermediates=(value,),
        details={
            "quadrature_error": quad_error,
            "reconstruction_deficit": deficit,
            "embedding_deviation": deviation,
            "realization_error": realization,
        },
    )
