"""Selections t ↦ f(t) ∈ F(t) feeding the Aumann fan and the single-valued paths."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from geometry import point_body, point_distances, steiner_point
from multifunctions.base import Multifunction, verification_grid
from shared.enums import OracleSupport, SelectionKind
from shared.errors import DimensionMismatchError, UnsupportedDimensionError

# Steiner points are 1-Lipschitz in h on the line and 4/π-Lipschitz in the plane.
_STEINER_LIPSCHITZ = {1: 1.0, 2: 4.0 / np.pi}

MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Selection:
    """A vectorized selection of ``parent``: ``points(ts)`` is an (n, dim) array."""

    parent: Multifunction
    kind: SelectionKind
    points: Callable[[np.ndarray], np.ndarray]
    lipschitz: float | None = None
    params: dict[str, Any] = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.parent.dim

    @property
    def name(self) -> str:
        return f"{self.kind}({self.parent.name})"

    def __call__(self, t: float) -> np.ndarray:
        return self.points(np.array([float(t)]))[0]

    def to_dict(self) -> dict[str, Any]:
        return {"kind": str(self.kind), "parent": self.parent.to_dict(), **self.params}


def steiner_selection(F: Multifunction) -> Selection:
    """t ↦ steiner_point(F(t)).

    Raises:
        UnsupportedDimensionError: For dim 3.
    """
    if F.dim > 2:
        raise UnsupportedDimensionError("Steiner selections are implemented for dim ≤ 2")

    def points(ts: np.ndarray) -> np.ndarray:
        ts = np.atleast_1d(ts)
        if ts.size == 0:
            return np.zeros((0, F.dim))
        return np.vstack([steiner_point(F(t)) for t in ts])

    lipschitz = None if F.lipschitz is None else F.lipschitz * _STEINER_LIPSCHITZ[F.dim]
    return Selection(F, SelectionKind.STEINER, points, lipschitz)


def support_selection(F: Multifunction, u: Sequence[float] | np.ndarray | float) -> Selection:
    """t ↦ support_point(F(t), u), lexicographically largest on ties.

    Raises:
        DimensionMismatchError: If ``u`` is not a vector of F's dimension.
    """
    vec = np.atleast_1d(np.asarray(u, dtype=float))
    if vec.shape != (F.dim,):
        raise DimensionMismatchError(f"direction of shape {vec.shape} for a dim-{F.dim} multifunction")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise ValueError("support direction must be nonzero")
    vec = vec / norm

    def points(ts: np.ndarray) -> np.ndarray:
        return F.support_points(vec[None, :], np.atleast_1d(ts))[:, 0, :]

    return Selection(F, SelectionKind.SUPPORT_DIRECTION, points, None, {"u": vec.tolist()})


def convex_mix_selection(selections: Sequence[Selection], weights: Sequence[float]) -> Selection:
    """t ↦ Σ wᵢ·fᵢ(t) for selections of one parent and convex weights.

    Raises:
        ValueError: If weights are not convex or the selections disagree on the parent.
    """
    if not selections or len(selections) != len(weights):
        raise ValueError("need one weight per selection and at least one selection")
    parent = selections[0].parent
    if any(s.parent is not parent for s in selections):
        raise ValueError("a convex mix needs selections of the same multifunction")
    w = np.asarray(weights, dtype=float)
    if (w < 0).any() or abs(float(w.sum()) - 1.0) > 1e-12:
        raise ValueError("mix weights must be nonnegative and sum to 1")

    def points(ts: np.ndarray) -> np.ndarray:
        return sum(wi * s.points(ts) for wi, s in zip(w, selections))

    lips = [s.lipschitz for s in selections]
    lipschitz = None if any(x is None for x in lips) else float(np.dot(w, lips))
    return Selection(
        parent,
        SelectionKind.CONVEX_MIX,
        points,
        lipschitz,
        {"weights": w.tolist(), "selections": [s.to_dict() for s in selections]},
    )


def point_selection(F: Multifunction) -> Selection:
    """The unique selection of a single-valued multifunction."""

    def points(ts: np.ndarray) -> np.ndarray:
        ts = np.atleast_1d(ts)
        return F.support_points(np.eye(F.dim)[:1], ts)[:, 0, :]

    return Selection(F, SelectionKind.POINT, points, F.lipschitz)


def point_valued(f: Selection) -> Multifunction:
    """t ↦ {f(t)} as a multifunction.

    For point selections the parent's closed-form support carries over.
    """
    parent = f.parent
    inherited = f.kind == SelectionKind.POINT and parent.has_oracle

    def support(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return f.points(ts) @ directions.T

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        p = f.points(ts)
        return np.broadcast_to(p[:, None, :], (len(p), len(directions), f.dim)).copy()

    return Multifunction(
        name=f"point[{f.name}]",
        dim=f.dim,
        evaluate=lambda t: point_body(f(t)),
        bound=parent.bound,
        lipschitz=f.lipschitz,
        jumps=parent.jumps,
        params={"selection": f.to_dict()},
        fast_support=support,
        fast_support_points=points,
        reference_support=parent.reference_support if inherited else None,
        oracle_support=parent.oracle_support if inherited else OracleSupport.NONE,
    )


def membership_gap(f: Selection, ts: np.ndarray | None = None) -> float:
    """max over ``ts`` of dist(f(t), F(t)); defaults to the verification grid."""
    ts = verification_grid() if ts is None else np.atleast_1d(ts)
    pts = f.points(ts)
    gaps = [float(point_distances(p[None, :], f.parent(t))[0]) for t, p in zip(ts, pts)]
    return max(gaps, default=0.0)
