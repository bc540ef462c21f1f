"""Brute-force reference integrals of support functions.

For every direction d of a fine grid the oracle integrates the closed-form
support t ↦ δ*(d, F(t)) by composite Gauss–Legendre quadrature. Panels are
split at the domain endpoints, the jumps of F and the per-direction kinks of
the support, so each panel sees an analytic integrand. The error bound of a
direction is the change between P and 2P panels; the reported value is the
2P one.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Any, Protocol

import numpy as np

from domain import IntervalSet
from geometry import ConvexBody, embed, grid_indices
from geometry.embedding import DirectionGrid, SupportVector, direction_grid, support_matrix
from multifunctions import Multifunction
from shared.config import settings
from shared.errors import DimensionMismatchError, OracleUnavailableError
from shared.parallel import chunked, ordered_map

logger = logging.getLogger(__name__)

MIN_PANELS = 64
MIN_ORDER = 10
ORACLE_CHUNK = 256
# Integrator grids must be this many times coarser than the oracle grid.
GRID_RATIO = 4


@dataclass(frozen=True)
class OracleResult:
    """Reference support values of ∫_A F dμ on a fine direction grid."""

    support_values: SupportVector
    quadrature_order: int
    panels: int
    per_direction_error: float
    errors: np.ndarray

    @property
    def grid(self) -> DirectionGrid:
        return self.support_values.grid

    def to_dict(self) -> dict[str, Any]:
        return {
            "grid": self.grid.to_dict(),
            "values": self.support_values.values.tolist(),
            "errors": self.errors.tolist(),
            "error": self.per_direction_error,
            "panels": self.panels,
            "order": self.quadrature_order,
        }


@functools.lru_cache(maxsize=8)
def _legendre(order: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _segments(
    F: Multifunction, A: IntervalSet, directions: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Per-direction smooth pieces of A as (K, S) lower and upper ends."""
    kinks = F.kinks(directions)
    jumps = np.asarray(F.jumps, dtype=float)
    K = len(directions)
    los, his = [], []
    for a, b in zip(A.starts, A.ends):
        inner = np.hstack([np.broadcast_to(jumps, (K, len(jumps))), kinks])
        inner = np.where(np.isnan(inner), a, np.clip(inner, a, b))
        edges = np.sort(np.hstack([np.full((K, 1), a), inner, np.full((K, 1), b)]), axis=1)
        los.append(edges[:, :-1])
        his.append(edges[:, 1:])
    return np.hstack(los), np.hstack(his)


def _composite(
    F: Multifunction,
    directions: np.ndarray,
    lo: np.ndarray,
    hi: np.ndarray,
    panels: int,
    order: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss–Legendre sums per direction and the matching Σ|v·w|."""
    x, w = _legendre(order)
    frac = np.arange(panels + 1) / panels
    edges = lo[..., None] + (hi - lo)[..., None] * frac  # (K, S, P+1)
    mid = (edges[..., 1:] + edges[..., :-1]) / 2.0
    half = (edges[..., 1:] - edges[..., :-1]) / 2.0
    nodes = mid[..., None] + half[..., None] * x  # (K, S, P, n)
    weights = half[..., None] * w
    K = len(directions)
    values = F.reference_values(directions, nodes.reshape(K, -1))
    terms = values * weights.reshape(K, -1)
    return terms.sum(axis=1), np.abs(terms).sum(axis=1)


def oracle_integral(
    F: Multifunction,
    A: IntervalSet,
    directions: int | None = None,
    panels: int | None = None,
    order: int | None = None,
    workers: int = 1,
) -> OracleResult:
    """Support values of the true ∫_A F dμ on the fine oracle grid.

    Args:
        F (Multifunction): An entry with analytic or piecewise-linear support.
        A (IntervalSet): Integration domain.
        directions (int | None): Oracle grid size; defaults to
            ``settings.oracle.directions``.
        panels (int | None): Base panels per smooth piece, at least 64.
        order (int | None): Gauss–Legendre order, at least 10.
        workers (int): Threads over direction chunks.

    Returns:
        OracleResult: Values from 2·panels panels with the P/2P difference as
        the per-direction error.

    Raises:
        OracleUnavailableError: If F has no closed-form support.
        ValueError: If ``panels`` or ``order`` fall below the minimum.
    """
    if not F.has_oracle:
        raise OracleUnavailableError(f"{F.name} has no closed-form support; no oracle")
    panels = settings.oracle.panels if panels is None else panels
    order = settings.oracle.order if order is None else order
    if panels < MIN_PANELS or order < MIN_ORDER:
        raise ValueError(
            f"oracle needs ≥ {MIN_PANELS} panels of order ≥ {MIN_ORDER}, got {panels} × {order}"
        )
    m_oracle = settings.oracle.directions if directions is None else directions
    grid = direction_grid(F.dim, m_oracle)
    m = len(grid.directions)
    if A.is_empty:
        return OracleResult(SupportVector(grid, np.zeros(m)), order, panels, 0.0, np.zeros(m))

    def run(chunk: range) -> tuple[np.ndarray, np.ndarray]:
        dirs = grid.directions[chunk.start : chunk.stop]
        lo, hi = _segments(F, A, dirs)
        coarse, _ = _composite(F, dirs, lo, hi, panels, order)
        fine, magnitude = _composite(F, dirs, lo, hi, 2 * panels, order)
        roundoff = 64.0 * np.finfo(float).eps * magnitude
        return fine, np.abs(fine - coarse) + roundoff

    parts = ordered_map(run, chunked(m, ORACLE_CHUNK), workers)
    values = np.concatenate([v for v, _ in parts])
    errors = np.concatenate([e for _, e in parts])
    error = float(errors.max())
    logger.info(
        "oracle for %s: m=%d, %d×%d panels, max error %.3e", F.name, m, 2 * panels, order, error
    )
    return OracleResult(SupportVector(grid, values), order, panels, error, errors)


class GridValue(Protocol):
    """Anything carrying a body and the grid it was computed on."""

    @property
    def value(self) -> ConvexBody: ...

    @property
    def grid(self) -> DirectionGrid: ...


def support_distance(value: ConvexBody, grid: DirectionGrid, o: OracleResult) -> float:
    """max over the directions of ``grid`` of |δ*(d, value) − oracle(d)|.

    Raises:
        GridMismatchError: If ``grid`` is not contained in the oracle grid.
    """
    idx = grid_indices(grid, o.grid)
    if o.grid.resolution < GRID_RATIO * grid.resolution and grid.dim > 1:
        logger.warning(
            "oracle grid m=%d is less than %d× the compared grid m=%d",
            o.grid.resolution,
            GRID_RATIO,
            grid.resolution,
        )
    s = embed(value, grid).values
    return float(np.max(np.abs(s - o.support_values.values[idx])))


def oracle_distance(r: GridValue, o: OracleResult) -> float:
    """Distance of a computed integral to the oracle over the integral's own grid.

    Raises:
        GridMismatchError: If the result grid is not contained in the oracle grid.
    """
    return support_distance(r.value, r.grid, o)


def dense_distance(body: ConvexBody, o: OracleResult) -> float:
    """max over every oracle direction of |δ*(d, body) − oracle(d)|.

    In the plane this approximates the Hausdorff distance to the true integral
    from below, to within the oracle grid deficit.
    """
    if body.dim != o.grid.dim:
        raise DimensionMismatchError(f"dim-{body.dim} body against a dim-{o.grid.dim} oracle")
    s = support_matrix(body.vertices, o.grid.directions)
    return float(np.max(np.abs(s - o.support_values.values)))
