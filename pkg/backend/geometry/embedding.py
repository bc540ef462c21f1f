"""Support-function embedding of convex bodies over finite direction grids.

``embed`` maps a body to its support values on a shared ``DirectionGrid``; set
addition and nonnegative scaling become vector operations there. ``reconstruct``
inverts the map for consistent vectors by intersecting the grid half-planes.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import HalfspaceIntersection

from geometry.body import REL_TOL, ConvexBody, canonicalize
from shared.errors import (
    DimensionMismatchError,
    EmptyBodyError,
    GridMismatchError,
    InconsistentSupportError,
    NegativeScaleError,
)

_GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


def _fibonacci_sphere(m: int, offset: float = 0.5) -> np.ndarray:
    k = np.arange(m) + offset
    z = 1.0 - 2.0 * k / m
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, None))
    phi = _GOLDEN_ANGLE * np.arange(m)
    pts = np.column_stack([r * np.cos(phi), r * np.sin(phi), z])
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


@dataclass(frozen=True, eq=False)
class DirectionGrid:
    """Unit directions shared by every support vector of one (dim, m).

    Obtain grids through ``direction_grid`` so equal parameters give the same
    object.
    """

    dim: int
    resolution: int
    directions: np.ndarray

    def __post_init__(self) -> None:
        d = np.array(self.directions, dtype=float)
        d.flags.writeable = False
        object.__setattr__(self, "directions", d)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DirectionGrid):
            return NotImplemented
        return (self.dim, self.resolution) == (other.dim, other.resolution)

    def __hash__(self) -> int:
        return hash((self.dim, self.resolution))

    @functools.cached_property
    def covering_angle(self) -> float:
        """Largest angle from any unit direction to its nearest grid direction."""
        if self.dim == 1:
            return 0.0
        if self.dim == 2:
            return float(np.pi / self.resolution)
        dense = _fibonacci_sphere(8 * self.resolution, offset=0.25)
        nearest = np.max(dense @ self.directions.T, axis=1)
        return float(np.arccos(np.clip(nearest.min(), -1.0, 1.0)))

    @property
    def deficit_factor(self) -> float:
        """1 − cos(covering angle); multiplies circumradii in grid-deficit bounds."""
        return float(1.0 - np.cos(self.covering_angle))

    def to_dict(self) -> dict[str, int]:
        return {"dim": self.dim, "m": self.resolution}


@functools.lru_cache(maxsize=64)
def _build_grid(dim: int, m: int) -> DirectionGrid:
    if dim == 1:
        return DirectionGrid(1, 2, np.array([[1.0], [-1.0]]))
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(m) / m
        return DirectionGrid(2, m, np.column_stack([np.cos(angles), np.sin(angles)]))
    return DirectionGrid(3, m, _fibonacci_sphere(m))


def direction_grid(dim: int, m: int) -> DirectionGrid:
    """The shared grid for ``(dim, m)``.

    dim 1 is always {+1, −1}; dim 2 is uniform in angle starting at (1, 0);
    dim 3 is a deterministic Fibonacci sphere.
    """
    if not 1 <= dim <= 3:
        raise DimensionMismatchError(f"no direction grid in dimension {dim}")
    if dim == 1:
        return _build_grid(1, 2)
    if m < (3 if dim == 2 else 4):
        raise ValueError(f"a dim-{dim} grid needs more than {m} directions")
    return _build_grid(dim, m)


def grid_indices(coarse: DirectionGrid, fine: DirectionGrid) -> np.ndarray:
    """Positions of the directions of ``coarse`` inside ``fine``.

    Raises:
        GridMismatchError: If ``coarse`` is not a subset of ``fine``.
    """
    if coarse.dim != fine.dim:
        raise GridMismatchError(f"grids of dims {coarse.dim} and {fine.dim}")
    if coarse == fine:
        return np.arange(coarse.resolution)
    if coarse.dim == 2 and fine.resolution % coarse.resolution == 0:
        return np.arange(coarse.resolution) * (fine.resolution // coarse.resolution)
    raise GridMismatchError(
        f"the m={coarse.resolution} grid is not contained in the m={fine.resolution} grid"
    )


@dataclass(frozen=True, eq=False)
class SupportVector:
    """Support values of one body, ``values[k] = δ*(directions[k], A)``."""

    grid: DirectionGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.values, dtype=float)
        if v.shape != (self.grid.resolution,):
            raise GridMismatchError(
                f"{v.shape} values for a grid of {self.grid.resolution} directions"
            )
        v.flags.writeable = False
        object.__setattr__(self, "values", v)

    def _check(self, other: SupportVector) -> None:
        if self.grid != other.grid:
            raise GridMismatchError(
                f"support vectors on grids {self.grid.to_dict()} and {other.grid.to_dict()}"
            )

    def __add__(self, other: SupportVector) -> SupportVector:
        self._check(other)
        return SupportVector(self.grid, self.values + other.values)

    def scaled(self, lam: float) -> SupportVector:
        if lam < 0:
            raise NegativeScaleError(f"cannot scale a support vector by {lam}")
        return SupportVector(self.grid, self.values * lam)

    def to_dict(self) -> dict[str, Any]:
        return {"m": self.grid.resolution, "dim": self.grid.dim, "values": self.values.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> SupportVector:
        return cls(direction_grid(int(data["dim"]), int(data["m"])), data["values"])


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The set {x : ⟨normal, x⟩ ≤ offset}."""

    normal: np.ndarray
    offset: float

    def __post_init__(self) -> None:
        n = np.array(self.normal, dtype=float)
        if abs(float(np.linalg.norm(n)) - 1.0) > 1e-12:
            raise ValueError(f"half-space normal {n.tolist()} is not a unit vector")
        n.flags.writeable = False
        object.__setattr__(self, "normal", n)
        object.__setattr__(self, "offset", float(self.offset))

    def excess(self, points: np.ndarray) -> np.ndarray:
        """⟨normal, x⟩ − offset per row; positive means outside."""
        return np.atleast_2d(points) @ self.normal - self.offset

    def contains(self, point: np.ndarray, tol: float = 0.0) -> bool:
        return bool(self.excess(np.asarray(point, dtype=float)[None, :])[0] <= tol)


def halfspaces(s: SupportVector) -> list[Halfspace]:
    return [Halfspace(d, v) for d, v in zip(s.grid.directions, s.values)]


# ---------------------------------------------------------------------------
# Embedding
# ---------------------------------------------------------------------------


def support_matrix(vertices: np.ndarray, directions: np.ndarray) -> np.ndarray:
    """max over vertices of ⟨d, v⟩ for each direction row d."""
    return np.max(vertices @ directions.T, axis=0)


def embed(A: ConvexBody, grid: DirectionGrid) -> SupportVector:
    """j(A) restricted to ``grid``: ``values[k] = δ*(d_k, A)``.

    Raises:
        DimensionMismatchError: If the body and grid dimensions differ.
    """
    if A.dim != grid.dim:
        raise DimensionMismatchError(f"dim-{A.dim} body on a dim-{grid.dim} grid")
    return SupportVector(grid, support_matrix(A.vertices, grid.directions))


def sup_norm_distance(s: SupportVector, t: SupportVector) -> float:
    """max_k |s_k − t_k|.

    Raises:
        GridMismatchError: If the vectors live on different grids.
    """
    s._check(t)
    return float(np.max(np.abs(s.values - t.values)))


# ---------------------------------------------------------------------------
# Reconstruction
# ---------------------------------------------------------------------------


def consistency_tolerance(s: SupportVector) -> float:
    """τ_cons = 1e-9·max(max|values|, 1)."""
    return 1e-9 * max(float(np.max(np.abs(s.values))), 1.0)


def _clip(poly: np.ndarray, normal: np.ndarray, offset: float) -> np.ndarray:
    """Sutherland–Hodgman step of a convex polygon against one half-plane."""
    s = poly @ normal - offset
    inside = s <= 0.0
    if inside.all():
        return poly
    if not inside.any():
        raise EmptyBodyError("the half-plane intersection is empty")
    nxt = np.roll(poly, -1, axis=0)
    s_next = np.roll(s, -1)
    crosses = inside != np.roll(inside, -1)
    with np.errstate(divide="ignore", invalid="ignore"):
        frac = np.where(crosses, s / (s - s_next), 0.0)
    cut = poly + frac[:, None] * (nxt - poly)
    keep = np.column_stack([inside, crosses])
    return np.stack([poly, cut], axis=1)[keep]


def _intersect_1d(values: np.ndarray, slack: float) -> ConvexBody:
    lo, hi = -values[1], values[0]
    if lo > hi + slack:
        raise EmptyBodyError(f"[{lo}, {hi}] is empty")
    if lo > hi:
        lo = hi = (lo + hi) / 2.0
    return canonicalize([[lo], [hi]])


def _intersect_2d(s: SupportVector, slack: float) -> ConvexBody:
    r = 2.0 * float(np.max(np.abs(s.values))) + 1.0
    poly = np.array([[-r, -r], [r, -r], [r, r], [-r, r]])
    for d, v in zip(s.grid.directions, s.values):
        poly = _clip(poly, d, v + slack)
    return canonicalize(poly)


def _intersect_3d(s: SupportVector, slack: float) -> ConvexBody:
    D, v = s.grid.directions, s.values
    # Chebyshev center: maximize r subject to ⟨d, x⟩ + r ≤ v.
    res = linprog(
        c=[0.0, 0.0, 0.0, -1.0],
        A_ub=np.column_stack([D, np.ones(len(D))]),
        b_ub=v,
        bounds=[(None, None)] * 3 + [(None, None)],
        method="highs",
    )
    if res.status != 0 or res.x[3] < -slack:
        raise EmptyBodyError("the half-space intersection is empty")
    center, radius = res.x[:3], res.x[3]
    if radius <= slack:
        return canonicalize([center])
    hs = HalfspaceIntersection(np.column_stack([D, -v]), center)
    return canonicalize(hs.intersections)


def intersect_halfspaces(s: SupportVector) -> ConvexBody:
    """∩_k {x : ⟨d_k, x⟩ ≤ values[k]} with no consistency check.

    Raises:
        EmptyBodyError: If the intersection is empty.
    """
    slack = REL_TOL * (1.0 + float(np.max(np.abs(s.values))))
    if s.grid.dim == 1:
        return _intersect_1d(s.values, slack)
    if s.grid.dim == 2:
        return _intersect_2d(s, slack)
    return _intersect_3d(s, slack)


def reconstruct(s: SupportVector, tolerance: float | None = None) -> ConvexBody:
    """The polytope cut out by the grid half-planes of ``s``.

    Args:
        s (SupportVector): Support values to invert.
        tolerance (float | None): Largest accepted change of any component
            under re-embedding; defaults to τ_cons.

    Returns:
        ConvexBody: ∩_k {x : ⟨d_k, x⟩ ≤ values[k]}.

    Raises:
        EmptyBodyError: If the intersection is empty.
        InconsistentSupportError: If some grid half-plane is not tight on the
            intersection beyond ``tolerance``.
    """
    tol = consistency_tolerance(s) if tolerance is None else tolerance
    body = intersect_halfspaces(s)
    deviation = float(np.max(np.abs(embed(body, s.grid).values - s.values)))
    if deviation > tol:
        raise InconsistentSupportError(
            f"re-embedding moves a support value by {deviation:.3e} > {tol:.3e}"
        )
    return body


def support_consistency_check(s: SupportVector, tolerance: float | None = None) -> bool:
    """True iff ``s`` is, within tolerance, the support vector of some body."""
    try:
        reconstruct(s, tolerance)
    except (EmptyBodyError, InconsistentSupportError):
        return False
    return True


def reconstruction_deficit(s: SupportVector) -> float:
    """Bound on h(reconstruct(s), C) for any body C whose grid support is ``s``.

    In the plane the intersection vertex q_k of lines k and k+1 lies within
    dist(q_k, [q_{k−1}, q_{k+1}]) of C, since C touches both lines inside the
    adjacent edges. In dim 3 a first-order covering bound is used.
    """
    grid = s.grid
    if grid.dim == 1:
        return 0.0
    if grid.dim == 3:
        r = float(np.max(np.abs(s.values))) / max(np.cos(grid.covering_angle), 1e-12)
        return r * float(np.tan(grid.covering_angle))
    D, v = grid.directions, s.values
    D1, v1 = np.roll(D, -1, axis=0), np.roll(v, -1)
    det = D[:, 0] * D1[:, 1] - D[:, 1] * D1[:, 0]
    q = np.column_stack([(v * D1[:, 1] - v1 * D[:, 1]) / det, (v1 * D[:, 0] - v * D1[:, 0]) / det])
    prev, nxt = np.roll(q, 1, axis=0), np.roll(q, -1, axis=0)
    chord = nxt - prev
    length2 = np.einsum("kj,kj->k", chord, chord)
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(length2 > 0, np.einsum("kj,kj->k", q - prev, chord) / length2, 0.0)
    foot = prev + np.clip(t, 0.0, 1.0)[:, None] * chord
    return float(np.max(np.linalg.norm(q - foot, axis=1)))

