"""Multivalued McShane integration by sampled gauge-fine partitions.

Level k uses the gauge r_k = 2⁻ᵏ, shrunk near declared jumps. Each level draws
``tag_samples`` freely tagged fine partitions plus one midpoint-tagged
partition and measures the h-spread of their Riemann–Minkowski sums in the
embedding. The reported value is the exact midpoint sum.
"""

from __future__ import annotations

import logging

import numpy as np

from domain import IntervalSet, TaggedPartition, generate_mcshane_partition, refinement_gauge
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
from shared.enums import Method, Tagging
from shared.errors import UnboundedMultifunctionError
from shared.parallel import ordered_map

logger = logging.getLogger(__name__)


def _require_bound(F: Multifunction, tol: Tolerances) -> float:
    if F.bound is None:
        raise UnboundedMultifunctionError(f"{F.name} declares no bound M")
    if tol.leak * F.bound > tol.epsilon_target / 10.0:
        raise ValueError(
            f"leak·M = {tol.leak * F.bound:.3e} exceeds ε/10 = {tol.epsilon_target / 10.0:.3e}"
        )
    return F.bound


def _weights(p: TaggedPartition, A: IntervalSet) -> tuple[np.ndarray, np.ndarray]:
    lo, hi, tags = p.arrays()
    return A.overlap_measures(lo, hi), tags


def mcshane_level(
    F: Multifunction,
    A: IntervalSet,
    grid: DirectionGrid,
    k: int,
    tol: Tolerances,
    workers: int = 1,
    jumps: dict[float, float] | None = None,
) -> LevelOutcome:
    """One refinement level of the McShane schedule.

    The estimate is the sampled h-diameter: the largest pairwise grid
    distance between sums, plus the grid covering term 2·(1 − cos θ)·M·μ(A),
    plus the truncation term leak·M, plus μ(cell ∩ A)·(jump size) for every
    midpoint cell with a declared jump strictly inside.
    """
    bound = _require_bound(F, tol)
    jumps = jump_sizes(F) if jumps is None else jumps
    gauge = refinement_gauge(k, F.jumps)

    def sample(seed: int) -> tuple[np.ndarray, float, int]:
        p = generate_mcshane_partition(gauge, tol.leak, seed, Tagging.RANDOM)
        weights, tags = _weights(p, A)
        vector, evals = embedded_sum(F, grid, weights, tags)
        return vector, p.leak, evals

    seeds = [seed_for(tol.seed, k, i) for i in range(tol.tag_samples)]
    sampled = ordered_map(sample, seeds, workers)

    midpoint = generate_mcshane_partition(gauge, tol.leak, tol.seed, Tagging.MIDPOINT)
    weights, tags = _weights(midpoint, A)
    lo, hi, _ = midpoint.arrays()
    straddle = float(
        sum(weights[(lo < j) & (j < hi)].sum() * size for j, size in jumps.items())
    )
    mid_vector, mid_evals = embedded_sum(F, grid, weights, tags)
    value, exact_evals = exact_sum(F, weights, tags)

    vectors = np.vstack([mid_vector, *(v for v, _, _ in sampled)])
    leak = max([midpoint.leak, *(lk for _, lk, _ in sampled)])
    diameter = spread(vectors)
    covering = 2.0 * grid.deficit_factor * bound * A.measure
    evaluations = mid_evals + exact_evals + sum(n for _, _, n in sampled)
    return LevelOutcome(
        refinement=k,
        value=value,
        estimate=diameter + covering + leak * bound + straddle,
        evaluations=evaluations,
        rigorous=False,
        details={
            "sampled_diameter": diameter,
            "covering_term": covering,
            "leak": leak,
            "jump_term": straddle,
            "cells": float(len(midpoint.cells)),
        },
    )


def mcshane_integrate(
    F: Multifunction, A: IntervalSet, tol: Tolerances, workers: int = 1
) -> IntegralResult:
    """(McS)∫_A F dμ.

    Args:
        F (Multifunction): Integrand with a declared bound M.
        A (IntervalSet): Domain of integration inside [0, 1].
        tol (Tolerances): ε, depth budget, sample count, grid size, leak, seed.
        workers (int): Threads for the tag-sample loop.

    Returns:
        IntegralResult: Midpoint sum at the first level whose sampled
        diameter plus leak term is at most ε.

    Raises:
        UnboundedMultifunctionError: If F declares no bound.
        NoConvergenceError: If no level up to ``max_depth`` converges.
    """
    _require_bound(F, tol)
    grid = direction_grid(F.dim, tol.directions)
    if A.is_empty:
        return empty_result(F, grid, Method.MCSHANE)
    jumps = jump_sizes(F)
    return run_levels(
        Method.MCSHANE,
        lambda k: mcshane_level(F, A, grid, k, tol, workers, jumps),
        F,
        A,
        grid,
        tol,
    )
