"""Point–polytope distances and the Hausdorff metric."""

from collections.abc import Sequence

import numpy as np
from scipy.optimize import nnls

from geometry.body import ConvexBody, circumradius, require_same_dim
from shared.errors import DimensionMismatchError

_BLOCK = 256


def _distances_1d(x: np.ndarray, B: ConvexBody) -> np.ndarray:
    lo, hi = B.vertices[0, 0], B.vertices[-1, 0]
    return np.maximum(np.maximum(lo - x[:, 0], x[:, 0] - hi), 0.0)


def _distances_2d(points: np.ndarray, B: ConvexBody) -> np.ndarray:
    V = B.vertices
    if len(V) == 1:
        return np.linalg.norm(points - V[0], axis=1)
    a = V
    e = np.roll(V, -1, axis=0) - V
    rel = points[:, None, :] - a[None, :, :]
    lengths = np.einsum("kj,kj->k", e, e)
    t = np.clip(np.einsum("nkj,kj->nk", rel, e) / lengths, 0.0, 1.0)
    gap = rel - t[:, :, None] * e[None, :, :]
    dist = np.sqrt(np.einsum("nkj,nkj->nk", gap, gap)).min(axis=1)
    if len(V) >= 3:
        cross = e[None, :, 0] * rel[:, :, 1] - e[None, :, 1] * rel[:, :, 0]
        dist[np.all(cross >= 0.0, axis=1)] = 0.0
    return dist


def _distances_3d(points: np.ndarray, B: ConvexBody) -> np.ndarray:
    # Projection onto conv(V) as nonnegative least squares with a heavily
    # weighted sum-to-one row.
    V = B.vertices
    weight = 1e3 * (1.0 + circumradius(B))
    system = np.vstack([V.T, np.full((1, len(V)), weight)])
    out = np.empty(len(points))
    for i, p in enumerate(points):
        coeffs, _ = nnls(system, np.append(p, weight))
        total = coeffs.sum()
        if total > 0:
            coeffs = coeffs / total
        out[i] = float(np.linalg.norm(V.T @ coeffs - p))
    return out


def point_distances(points: np.ndarray, B: ConvexBody) -> np.ndarray:
    """Euclidean distance from each row of ``points`` to the polytope ``B``."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[1] != B.dim:
        raise DimensionMismatchError(f"points of dim {pts.shape[1]} against a dim-{B.dim} body")
    if len(pts) == 0:
        return np.zeros(0)
    if B.dim == 1:
        return _distances_1d(pts, B)
    if B.dim == 2:
        # Blocks keep the (points × edges) work arrays small for large polygons.
        return np.concatenate(
            [_distances_2d(pts[i : i + _BLOCK], B) for i in range(0, len(pts), _BLOCK)]
        )
    return _distances_3d(pts, B)


def distance_to_body(point: Sequence[float] | np.ndarray, B: ConvexBody) -> float:
    return float(point_distances(np.atleast_1d(np.asarray(point, dtype=float))[None, :], B)[0])


def directed_distance(A: ConvexBody, B: ConvexBody) -> float:
    """sup over a ∈ A of dist(a, B); attained at a vertex of A."""
    require_same_dim(A, B)
    return float(np.max(point_distances(A.vertices, B)))


def _normal_fan(P: ConvexBody) -> tuple[np.ndarray, np.ndarray]:
    """Sorted outward edge-normal angles in [0, 2π) of a polygon, and for each
    the vertex that maximizes ⟨u, ·⟩ on the arc starting there."""
    V = P.vertices
    if len(V) == 1:
        return np.zeros(0), np.zeros(0, dtype=int)
    x, y = V[:, 0], V[:, 1]
    clockwise = np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)) < 0.0
    if clockwise:
        V = V[::-1]
    e = np.roll(V, -1, axis=0) - V
    angles = np.mod(np.arctan2(-e[:, 0], e[:, 1]), 2.0 * np.pi)
    order = np.argsort(angles, kind="stable")
    vertex = (order + 1) % len(V)
    if clockwise:
        vertex = len(V) - 1 - vertex
    return angles[order], vertex


def _arc_maximizers(
    P: ConvexBody, fan: tuple[np.ndarray, np.ndarray], phi: np.ndarray
) -> np.ndarray:
    angles, vertex = fan
    if angles.size == 0:
        return np.broadcast_to(P.vertices[0], (len(phi), 2))
    pos = np.searchsorted(angles, phi, side="right") - 1
    return P.vertices[vertex[pos]]


def _hausdorff_2d(A: ConvexBody, B: ConvexBody) -> float:
    # h(A, B) = max over unit u of |δ*(u, A) − δ*(u, B)|. Between consecutive
    # normals of either polygon both maximizers are fixed, so the difference
    # is ⟨a − b, u⟩ and peaks at an arc end or where u is parallel to a − b.
    fan_a, fan_b = _normal_fan(A), _normal_fan(B)
    breaks = np.unique(np.concatenate([fan_a[0], fan_b[0]]))
    if breaks.size == 0:
        return float(np.linalg.norm(A.vertices[0] - B.vertices[0]))
    start = breaks
    end = np.append(breaks[1:], breaks[0] + 2.0 * np.pi)
    mid = (start + end) / 2.0
    w = _arc_maximizers(A, fan_a, mid) - _arc_maximizers(B, fan_b, mid)
    at_start = w[:, 0] * np.cos(start) + w[:, 1] * np.sin(start)
    at_end = w[:, 0] * np.cos(end) + w[:, 1] * np.sin(end)
    best = np.maximum(np.abs(at_start), np.abs(at_end))
    turn_start = w[:, 1] * np.cos(start) - w[:, 0] * np.sin(start)
    turn_end = w[:, 1] * np.cos(end) - w[:, 0] * np.sin(end)
    parallel = turn_start * turn_end <= 0.0
    best = np.where(parallel, np.maximum(best, np.linalg.norm(w, axis=1)), best)
    return float(best.max())


def hausdorff_distance(A: ConvexBody, B: ConvexBody) -> float:
    """Exact Hausdorff distance between two polytopes.

    Polygons go through their merged normal fans in O((n + m) log(n + m));
    dim 3 projects vertices by NNLS.

    Raises:
        DimensionMismatchError: If the dimensions differ.
    """
    require_same_dim(A, B)
    if A.dim == 2:
        return _hausdorff_2d(A, B)
    return max(directed_distance(A, B), directed_distance(B, A))


def body_tolerance(*bodies: ConvexBody) -> float:
    """ε_body = 1e-9·(1 + largest circumradius)."""
    return 1e-9 * (1.0 + max(circumradius(b) for b in bodies))


def bodies_close(A: ConvexBody, B: ConvexBody, tol: float | None = None) -> bool:
    """Body equality up to ``tol`` in the Hausdorff metric (default ε_body)."""
    limit = body_tolerance(A, B) if tol is None else tol
    return hausdorff_distance(A, B) <= limit
