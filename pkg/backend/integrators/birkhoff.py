"""Multivalued Birkhoff integration on the dyadic refinement chain.

At depth k the cells are [j·2⁻ᵏ, (j+1)·2⁻ᵏ). The stopping quantity is the
oscillation bound osc_k = Σ μ(cell ∩ A)·ĥ_cell, where ĥ_cell bounds
h(F(s), F(t)) over the cell. With a declared Lipschitz constant
ĥ_cell = L·width + (sizes of the jumps strictly inside the cell), which is
rigorous; without one it is sampled at three points and flagged.

The chain starts at the coarsest depth whose cell boundaries contain every
dyadic-rational jump.

For finite partitions the series Σ μ(Aₙ)F(tₙ) is a finite sum, so unconditional
convergence holds trivially. The value is the exact midpoint-tag sum and does
not depend on the direction grid, which only feeds sampled evidence.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable

import numpy as np

from domain import IntervalSet, generate_birkhoff_partition, sample_tags
from geometry.embedding import DirectionGrid, direction_grid
from integrators.results import IntegralResult, LevelOutcome, Tolerances
from integrators.riemann import (
    embedded_sum,
    empty_result,
    exact_sum,
    jump_sizes,
    run_levels,
    seed_for,
    spread,
)
from multifunctions import Multifunction
from shared.enums import Method
from shared.errors import UnboundedMultifunctionError
from shared.parallel import ordered_map

logger = logging.getLogger(__name__)


def first_depth(jumps: Iterable[float], max_depth: int) -> int:
    """Coarsest dyadic depth whose cell boundaries contain every dyadic jump.

    Jumps that are not multiples of 2⁻ᵏ for some k ≤ ``max_depth`` leave it at 0.
    """
    depth = 0
    for j in jumps:
        for k in range(max_depth + 1):
            if float(j * 2.0**k).is_integer():
                depth = max(depth, k)
                break
    return depth


def oscillation_bounds(
    F: Multifunction,
    grid: DirectionGrid,
    lo: np.ndarray,
    hi: np.ndarray,
    jumps: dict[float, float],
) -> tuple[np.ndarray, bool, int]:
    """Per-cell bounds ĥ on the h-oscillation of F, whether they are rigorous,
    and the number of F evaluations spent."""
    if F.lipschitz is not None:
        bounds = F.lipschitz * (hi - lo)
        for j, size in jumps.items():
            bounds = bounds + np.where((lo < j) & (j < hi), size, 0.0)
        return bounds, True, 0
    samples = np.concatenate([lo, (lo + hi) / 2.0, np.nextafter(hi, lo)])
    values = F.embedded(grid, samples).reshape(3, len(lo), -1)
    bounds = np.max(values.max(axis=0) - values.min(axis=0), axis=1)
    return bounds, False, len(samples)


def birkhoff_level(
    F: Multifunction,
    A: IntervalSet,
    grid: DirectionGrid,
    k: int,
    tol: Tolerances,
    workers: int = 1,
    jumps: dict[float, float] | None = None,
) -> LevelOutcome:
    """Dyadic depth k: oscillation bound, sampled tag spread and midpoint sum."""
    if F.bound is None:
        raise UnboundedMultifunctionError(f"{F.name} declares no bound M")
    jumps = jump_sizes(F) if jumps is None else jumps
    cells = generate_birkhoff_partition(k)
    n = len(cells)
    lo = np.arange(n) / n
    hi = (np.arange(n) + 1.0) / n
    weights = A.overlap_measures(lo, hi)
    keep = np.flatnonzero(weights > 0)
    lo, hi, weights = lo[keep], hi[keep], weights[keep]
    count = max(tol.tag_samples, 2)
    assignments = sample_tags([cells[i] for i in keep], count, seed_for(tol.seed, k))

    sampled = ordered_map(lambda tags: embedded_sum(F, grid, weights, tags), assignments, workers)
    vectors = np.vstack([v for v, _ in sampled])
    value, exact_evals = exact_sum(F, weights, assignments[1])

    bounds, rigorous, bound_evals = oscillation_bounds(F, grid, lo, hi, jumps)
    osc = float(weights @ bounds)
    diameter = spread(vectors)
    if rigorous and diameter > osc * (1.0 + 1e-9) + 1e-12:
        logger.warning(
            "%s depth %d: sampled spread %.3e exceeds the oscillation bound %.3e",
            F.name,
            k,
            diameter,
            osc,
        )
    if not rigorous:
        logger.warning("%s depth %d: no Lipschitz constant, oscillation is sampled", F.name, k)
    return LevelOutcome(
        refinement=k,
        value=value,
        estimate=max(osc, diameter),
        evaluations=exact_evals + bound_evals + sum(e for _, e in sampled),
        rigorous=rigorous,
        details={"oscillation": osc, "sampled_diameter": diameter, "cells": float(len(keep))},
    )


def birkhoff_integrate(
    F: Multifunction, A: IntervalSet, tol: Tolerances, workers: int = 1
) -> IntegralResult:
    """(B)∫_A F dμ by the oscillation criterion on dyadic partitions.

    Raises:
        UnboundedMultifunctionError: If F declares no bound.
        NoConvergenceError: If osc_k > ε for every depth up to ``max_depth``.
    """
    if F.bound is None:
        raise UnboundedMultifunctionError(f"{F.name} declares no bound M")
    grid = direction_grid(F.dim, tol.directions)
    if A.is_empty:
        return empty_result(F, grid, Method.BIRKHOFF)
    jumps = jump_sizes(F)
    return run_levels(
        Method.BIRKHOFF,
        lambda k: birkhoff_level(F, A, grid, k, tol, workers, jumps),
        F,
        A,
        grid,
        tol,
        start=first_depth(jumps, tol.max_depth),
    )
