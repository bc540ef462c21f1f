"""Convex bodies in canonical vertex representation.

A ``ConvexBody`` is a nonempty convex polytope in ℝ^dim (1 ≤ dim ≤ 3) stored
by its minimal vertex list:

- dim 1: ``[[lo], [hi]]`` (or a single vertex for a point);
- dim 2: counterclockwise, starting from the lexicographically smallest vertex;
- dim 3: lexicographically sorted hull vertices.

Bodies are immutable. Build them with ``canonicalize``; operations that
provably preserve the canonical form (``scale``) construct directly.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np
from scipy.spatial import ConvexHull

from shared.errors import (
    DimensionMismatchError,
    EmptyBodyError,
    NegativeScaleError,
    UnsupportedDimensionError,
)

# Coordinates closer than this (relative to the body's scale) are merged.
REL_TOL = 1e-12

# Edges whose polar angles differ by less than this are treated as parallel.
_ANGLE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class ConvexBody:
    """A convex polytope given by its canonical vertex list.

    The constructor trusts its input; use ``canonicalize`` for raw points.
    """

    vertices: np.ndarray

    def __post_init__(self) -> None:
        v = np.array(self.vertices, dtype=float)
        if v.ndim != 2 or v.shape[0] == 0:
            raise EmptyBodyError("a convex body needs at least one vertex")
        if not 1 <= v.shape[1] <= 3:
            raise DimensionMismatchError(f"dimension {v.shape[1]} outside 1..3")
        v.flags.writeable = False
        object.__setattr__(self, "vertices", v)

    @property
    def dim(self) -> int:
        return int(self.vertices.shape[1])

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def is_point(self) -> bool:
        return self.n_vertices == 1

    def to_dict(self) -> dict[str, Any]:
        return {"dim": self.dim, "vertices": self.vertices.tolist()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ConvexBody:
        """Parse ``{"dim": n, "vertices": [[...], ...]}`` and canonicalize it."""
        if "vertices" not in data:
            raise ValueError("body JSON needs a 'vertices' list")
        body = canonicalize(data["vertices"])
        if "dim" in data and int(data["dim"]) != body.dim:
            raise DimensionMismatchError(
                f"declared dim {data['dim']} but vertices have dim {body.dim}"
            )
        return body

    def __repr__(self) -> str:
        return f"ConvexBody(dim={self.dim}, vertices={self.vertices.tolist()})"


# ---------------------------------------------------------------------------
# Canonicalization
# ---------------------------------------------------------------------------


def _as_points(points: Iterable[Any] | np.ndarray) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
        if arr.ndim == 1:
            arr = arr[:, None]
    else:
        rows = [np.atleast_1d(np.asarray(p, dtype=float)) for p in points]
        if not rows:
            raise EmptyBodyError("cannot take the hull of no points")
        shapes = {row.shape for row in rows}
        if len(shapes) != 1:
            dims = sorted(s[0] if s else 0 for s in shapes)
            raise DimensionMismatchError(f"points of mixed dimensions {dims}")
        arr = np.vstack(rows)
    if arr.shape[0] == 0:
        raise EmptyBodyError("cannot take the hull of no points")
    if arr.ndim != 2 or not 1 <= arr.shape[1] <= 3:
        raise DimensionMismatchError(f"points must have dimension 1..3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("points must have finite coordinates")
    return arr


def merge_tolerance(points: np.ndarray) -> float:
    return REL_TOL * (1.0 + float(np.max(np.abs(points))))


def _monotone_chain(pts: np.ndarray, tol: float) -> list[int]:
    """Indices of the CCW hull of lexicographically sorted 2-D points.

    A middle point is dropped when it lies within ``tol`` of the chord joining
    its neighbours, which also absorbs near-duplicates.
    """
    n = len(pts)
    if n == 1:
        return [0]

    def keeps_turn(o: int, a: int, b: int) -> bool:
        ox, oy = pts[o]
        ax, ay = pts[a]
        bx, by = pts[b]
        cross = (ax - ox) * (by - oy) - (ay - oy) * (bx - ox)
        return cross > tol * float(np.hypot(bx - ox, by - oy))

    lower: list[int] = []
    for i in range(n):
        while len(lower) >= 2 and not keeps_turn(lower[-2], lower[-1], i):
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in range(n - 1, -1, -1):
        while len(upper) >= 2 and not keeps_turn(upper[-2], upper[-1], i):
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and np.max(np.abs(pts[hull[0]] - pts[hull[1]])) <= tol:
        return [hull[0]]
    return hull


def _lex_sorted(arr: np.ndarray) -> np.ndarray:
    return arr[np.lexsort(arr.T[::-1])]


def _hull_1d(arr: np.ndarray, tol: float) -> np.ndarray:
    lo, hi = float(arr.min()), float(arr.max())
    if hi - lo <= tol:
        return np.array([[lo]])
    return np.array([[lo], [hi]])


def _hull_2d(arr: np.ndarray, tol: float) -> np.ndarray:
    pts = np.unique(arr, axis=0)
    return pts[_monotone_chain(pts, tol)]


def _hull_3d(arr: np.ndarray, tol: float) -> np.ndarray:
    pts = np.unique(arr, axis=0)
    if len(pts) == 1:
        return pts
    centered = pts - pts.mean(axis=0)
    _, sing, vt = np.linalg.svd(centered, full_matrices=False)
    rank = int(np.sum(sing > tol * np.sqrt(len(pts))))
    if rank == 0:
        return pts[:1]
    if rank == 1:
        s = centered @ vt[0]
        return _lex_sorted(pts[[int(np.argmin(s)), int(np.argmax(s))]])
    if rank == 2:
        flat = centered @ vt[:2].T
        order = np.lexsort(flat.T[::-1])
        chain = _monotone_chain(flat[order], tol)
        return _lex_sorted(pts[order[chain]])
    hull = ConvexHull(pts)
    return _lex_sorted(pts[np.sort(hull.vertices)])


def canonicalize(points: Iterable[Any] | np.ndarray) -> ConvexBody:
    """Return the canonical minimal V-representation of conv(points).

    A 1-D ndarray is read as that many points on the line.

    Args:
        points (Iterable | np.ndarray): Points of a common dimension 1..3.

    Returns:
        ConvexBody: The hull in canonical vertex order.

    Raises:
        EmptyBodyError: If ``points`` is empty.
        DimensionMismatchError: If the points have mixed dimensions.
    """
    arr = _as_points(points)
    tol = merge_tolerance(arr)
    dim = arr.shape[1]
    if dim == 1:
        return ConvexBody(_hull_1d(arr, tol))
    if dim == 2:
        return ConvexBody(_hull_2d(arr, tol))
    return ConvexBody(_hull_3d(arr, tol))


def point_body(point: Sequence[float] | np.ndarray) -> ConvexBody:
    """The singleton body {point}."""
    return ConvexBody(np.atleast_1d(np.asarray(point, dtype=float))[None, :])


def origin(dim: int) -> ConvexBody:
    return ConvexBody(np.zeros((1, dim)))


def regular_polygon(
    m: int,
    radius: float = 1.0,
    center: Sequence[float] = (0.0, 0.0),
    phase: float = 0.0,
) -> ConvexBody:
    """Regular m-gon inscribed in the circle of ``radius`` about ``center``.

    Vertex k sits at angle ``phase + 2πk/m``.
    """
    if m < 3:
        raise ValueError(f"a polygon needs at least 3 vertices, got {m}")
    angles = phase + 2.0 * np.pi * np.arange(m) / m
    pts = np.column_stack([np.cos(angles), np.sin(angles)]) * radius + np.asarray(center)
    return canonicalize(pts)


def circumradius(A: ConvexBody) -> float:
    """Largest vertex norm, i.e. h(A, {0})."""
    return float(np.max(np.linalg.norm(A.vertices, axis=1)))


# ---------------------------------------------------------------------------
# Support functions
# ---------------------------------------------------------------------------


def _direction(u: Sequence[float] | np.ndarray | float, dim: int) -> np.ndarray:
    vec = np.atleast_1d(np.asarray(u, dtype=float))
    if vec.shape != (dim,):
        raise DimensionMismatchError(f"direction of shape {vec.shape} against a dim-{dim} body")
    return vec


def require_same_dim(*bodies: ConvexBody) -> int:
    dims = {b.dim for b in bodies}
    if len(dims) != 1:
        raise DimensionMismatchError(f"bodies of mixed dimensions {sorted(dims)}")
    return dims.pop()


def support_function(A: ConvexBody, u: Sequence[float] | np.ndarray | float) -> float:
    """δ*(u, A): the maximum of ⟨u, v⟩ over the vertices of A."""
    vec = _direction(u, A.dim)
    return float(np.max(A.vertices @ vec))


def support_points(A: ConvexBody, directions: np.ndarray) -> np.ndarray:
    """Vertices attaining δ*(d, A) for each row d of ``directions``.

    Ties go to the lexicographically largest vertex.

    Returns:
        np.ndarray: Array of shape ``(len(directions), dim)``.
    """
    dirs = np.atleast_2d(np.asarray(directions, dtype=float))
    if dirs.shape[1] != A.dim:
        raise DimensionMismatchError(
            f"directions of dim {dirs.shape[1]} against a dim-{A.dim} body"
        )
    # Vertices in descending lexicographic order; the first maximizer wins.
    order = np.lexsort(A.vertices.T[::-1])[::-1]
    ranked = dirs @ A.vertices[order].T
    hit = ranked == ranked.max(axis=1, keepdims=True)
    return A.vertices[order[np.argmax(hit, axis=1)]]


def support_point(A: ConvexBody, u: Sequence[float] | np.ndarray | float) -> np.ndarray:
    """The vertex attaining δ*(u, A), lexicographically largest on ties."""
    vec = _direction(u, A.dim)
    return support_points(A, vec[None, :])[0].copy()


# ---------------------------------------------------------------------------
# Minkowski arithmetic
# ---------------------------------------------------------------------------


def scale(A: ConvexBody, lam: float) -> ConvexBody:
    """λA for λ ≥ 0; the canonical vertex order is preserved.

    Raises:
        NegativeScaleError: If ``lam`` is negative.
    """
    if lam < 0:
        raise NegativeScaleError(f"cannot scale a body by {lam}")
    if lam == 0:
        return origin(A.dim)
    return ConvexBody(A.vertices * lam)


def _merge_edges(bodies: Sequence[ConvexBody], weights: np.ndarray) -> ConvexBody:
    """⊕ wᵢAᵢ in the plane by one angular sort of all scaled edge vectors.

    Every canonical polygon starts at its lexicographically smallest vertex, so
    the sum starts at the sum of those vertices and its edges are the input
    edges merged by polar angle measured from straight down.
    """
    start = np.zeros(2)
    edges: list[np.ndarray] = []
    for body, w in zip(bodies, weights):
        v = body.vertices * w
        start = start + v[0]
        if len(v) > 1:
            edges.append(np.roll(v, -1, axis=0) - v)
    if not edges:
        return point_body(start)
    e = np.concatenate(edges)
    angle = np.arctan2(e[:, 1], e[:, 0])
    angle = np.where(angle <= -np.pi / 2, angle + 2.0 * np.pi, angle)
    order = np.argsort(angle, kind="stable")
    angle, e = angle[order], e[order]
    groups = np.concatenate([[0], np.flatnonzero(np.diff(angle) > _ANGLE_TOL) + 1])
    merged = np.add.reduceat(e, groups, axis=0)
    path = start + np.cumsum(merged, axis=0)
    return canonicalize(np.vstack([start[None, :], path[:-1]]))


def minkowski_combination(
    bodies: Sequence[ConvexBody], weights: Sequence[float] | np.ndarray
) -> ConvexBody:
    """The Riemann–Minkowski sum ⊕ wᵢ·Aᵢ for nonnegative weights.

    Bodies with zero weight contribute {0}; an all-zero weight vector yields
    exactly {0}.

    Args:
        bodies (Sequence[ConvexBody]): Summands of one common dimension.
        weights (Sequence[float]): Nonnegative weights, one per body.

    Returns:
        ConvexBody: The weighted Minkowski sum.

    Raises:
        EmptyBodyError: If ``bodies`` is empty.
        DimensionMismatchError: On mixed dimensions or a length mismatch.
        NegativeScaleError: If a weight is negative.
    """
    if not bodies:
        raise EmptyBodyError("an empty Minkowski sum has no canonical dimension")
    dim = require_same_dim(*bodies)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(bodies),):
        raise DimensionMismatchError(f"{len(bodies)} bodies but {w.shape} weights")
    if np.any(w < 0):
        raise NegativeScaleError("Riemann–Minkowski weights must be nonnegative")
    keep = np.flatnonzero(w > 0)
    if keep.size == 0:
        return origin(dim)
    active = [bodies[i] for i in keep]
    w = w[keep]
    if dim == 1:
        lo = np.array([b.vertices[0, 0] for b in active])
        hi = np.array([b.vertices[-1, 0] for b in active])
        return canonicalize([[float(np.sum(w * lo))], [float(np.sum(w * hi))]])
    if dim == 2:
        return _merge_edges(active, w)
    total = scale(active[0], float(w[0]))
    for body, weight in zip(active[1:], w[1:]):
        total = minkowski_sum(total, scale(body, float(weight)))
    return total


def minkowski_sum(A: ConvexBody, B: ConvexBody) -> ConvexBody:
    """A ⊕ B, exact for polytopes.

    dim 1 adds endpoints, dim 2 merges edges by angle, dim 3 takes the hull of
    all pairwise vertex sums.

    Raises:
        DimensionMismatchError: If the dimensions differ.
    """
    dim = require_same_dim(A, B)
    if dim == 1:
        return canonicalize(
            [[A.vertices[0, 0] + B.vertices[0, 0]], [A.vertices[-1, 0] + B.vertices[-1, 0]]]
        )
    if dim == 2:
        return _merge_edges([A, B], np.ones(2))
    sums = (A.vertices[:, None, :] + B.vertices[None, :, :]).reshape(-1, 3)
    return canonicalize(sums)


# ---------------------------------------------------------------------------
# Steiner point
# ---------------------------------------------------------------------------


def steiner_point(A: ConvexBody) -> np.ndarray:
    """s(A) = (1/π)∫ u·δ*(u, A) du over the unit circle (midpoint in dim 1).

    In the plane δ*(u, A) = ⟨u, v⟩ on the normal cone of each vertex v, so the
    integral is evaluated exactly cone by cone.

    Raises:
        UnsupportedDimensionError: For dim 3.
    """
    V = A.vertices
    if A.dim == 1:
        return np.array([(V[0, 0] + V[-1, 0]) / 2.0])
    if A.dim == 3:
        raise UnsupportedDimensionError("Steiner points are implemented for dim ≤ 2")
    if len(V) == 1:
        return V[0].copy()
    edges = np.roll(V, -1, axis=0) - V
    # Outward normal of the CCW edge (ex, ey) is (ey, -ex).
    normal = np.arctan2(-edges[:, 0], edges[:, 1])
    lo = np.roll(normal, 1)
    width = np.mod(normal - lo, 2.0 * np.pi)
    hi = lo + width
    c2 = (np.sin(2.0 * hi) - np.sin(2.0 * lo)) / 4.0
    xy = -(np.cos(2.0 * hi) - np.cos(2.0 * lo)) / 4.0
    xx = width / 2.0 + c2
    yy = width / 2.0 - c2
    x = np.sum(xx * V[:, 0] + xy * V[:, 1]) / np.pi
    y = np.sum(xy * V[:, 0] + yy * V[:, 1]) / np.pi
    return np.array([x, y])
