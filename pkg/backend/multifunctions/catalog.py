"""Named test multifunctions addressable from scenario files.

Every entry is built from JSON-able params, carries verified metadata, and
records the closed-form support of its analytic integrand when one exists.
Entries are cached by (name, canonical params).
"""

from __future__ import annotations

import functools
import json
import logging
from collections.abc import Callable, Mapping
from typing import Any

import numpy as np

from geometry import (
    ConvexBody,
    canonicalize,
    circumradius,
    hausdorff_distance,
    minkowski_combination,
    point_body,
    regular_polygon,
    scale,
    support_points,
)
from geometry.embedding import support_matrix
from multifunctions.base import Multifunction, shared_times, verify
from shared.enums import OracleSupport
from shared.errors import DimensionMismatchError, UnknownCatalogEntryError

logger = logging.getLogger(__name__)

CATALOG_NAMES = (
    "constant_K",
    "segment_growth",
    "scaled_disk",
    "rotating_segment",
    "polytope_interp",
    "piecewise_jump",
    "single_valued_wrap",
)

_DEFAULT_SQUARE = [[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]
_DEFAULT_TRIANGLE = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]]


def _body(data: Any, field: str) -> ConvexBody:
    try:
        return canonicalize(data)
    except (TypeError, ValueError) as e:
        raise ValueError(f"{field}: {e}") from e


def _constant_support(K: ConvexBody) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        h = support_matrix(K.vertices, directions)
        return h[:, None] + np.zeros_like(ts, dtype=float)

    return reference


def _constant_points(K: ConvexBody) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        p = support_points(K, directions)
        return np.broadcast_to(p, (len(ts), *p.shape)).copy()

    return points


# ---------------------------------------------------------------------------
# Entries
# ---------------------------------------------------------------------------


def _constant_K(params: Mapping[str, Any]) -> Multifunction:
    K = _body(params.get("K", _DEFAULT_SQUARE), "K")
    reference = _constant_support(K)
    return Multifunction(
        name="constant_K",
        dim=K.dim,
        evaluate=lambda t: K,
        bound=circumradius(K),
        lipschitz=0.0,
        params={"K": K.vertices.tolist()},
        fast_support=shared_times(reference),
        fast_support_points=_constant_points(K),
        reference_support=reference,
        oracle_support=OracleSupport.PIECEWISE_LINEAR,
    )


def _segment_growth(params: Mapping[str, Any]) -> Multifunction:
    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return np.maximum(0.0, directions[:, 0:1] * ts)

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        # Ties (t = 0) resolve to the single point 0 either way.
        upper = directions[:, 0] > 0
        return np.where(upper[None, :], ts[:, None], 0.0)[:, :, None]

    return Multifunction(
        name="segment_growth",
        dim=1,
        evaluate=lambda t: canonicalize([[0.0], [t]]),
        bound=1.0,
        lipschitz=1.0,
        fast_support=shared_times(reference),
        fast_support_points=points,
        reference_support=reference,
        oracle_support=OracleSupport.ANALYTIC,
    )


def _scaled_disk(params: Mapping[str, Any]) -> Multifunction:
    p = int(params.get("polygon_m", 256))
    if p < 3:
        raise ValueError(f"polygon_m: need at least 3 vertices, got {p}")
    D = regular_polygon(p)

    def support(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return ts[:, None] * support_matrix(D.vertices, directions)[None, :]

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return ts[:, None, None] * support_points(D, directions)[None, :, :]

    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return np.linalg.norm(directions, axis=1)[:, None] * ts

    return Multifunction(
        name="scaled_disk",
        dim=2,
        evaluate=lambda t: scale(D, t),
        bound=1.0,
        lipschitz=1.0,
        params={"polygon_m": p},
        fast_support=support,
        fast_support_points=points,
        reference_support=reference,
        oracle_support=OracleSupport.ANALYTIC,
        realization_error=float(1.0 - np.cos(np.pi / p)),
    )


def _rotating_segment(params: Mapping[str, Any]) -> Multifunction:
    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        angle = np.pi * ts
        return np.abs(directions[:, 0:1] * np.cos(angle) + directions[:, 1:2] * np.sin(angle))

    def kinks(directions: np.ndarray) -> np.ndarray:
        # ⟨u, v(t)⟩ = |u|·cos(θ_u − πt) vanishes once per unit of t.
        theta = np.arctan2(directions[:, 1], directions[:, 0])
        return np.mod((theta - np.pi / 2.0) / np.pi, 1.0)[:, None]

    def evaluate(t: float) -> ConvexBody:
        v = np.array([np.cos(np.pi * t), np.sin(np.pi * t)])
        return canonicalize([v, -v])

    return Multifunction(
        name="rotating_segment",
        dim=2,
        evaluate=evaluate,
        bound=1.0,
        lipschitz=float(np.pi),
        fast_support=shared_times(reference),
        reference_support=reference,
        reference_kinks=kinks,
        oracle_support=OracleSupport.ANALYTIC,
    )


def _polytope_interp(params: Mapping[str, Any]) -> Multifunction:
    A = _body(params.get("A", _DEFAULT_TRIANGLE), "A")
    B = _body(params.get("B", [[0.5 * x, 0.5 * y] for x, y in _DEFAULT_SQUARE]), "B")
    if A.dim != B.dim:
        raise DimensionMismatchError(f"A is dim {A.dim}, B is dim {B.dim}")

    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        hA = support_matrix(A.vertices, directions)[:, None]
        hB = support_matrix(B.vertices, directions)[:, None]
        return (1.0 - ts) * hA + ts * hB

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        pA = support_points(A, directions)[None, :, :]
        pB = support_points(B, directions)[None, :, :]
        return (1.0 - ts)[:, None, None] * pA + ts[:, None, None] * pB

    def evaluate(t: float) -> ConvexBody:
        return minkowski_combination([A, B], [1.0 - t, t])

    return Multifunction(
        name="polytope_interp",
        dim=A.dim,
        evaluate=evaluate,
        bound=max(circumradius(A), circumradius(B)),
        lipschitz=hausdorff_distance(A, B),
        params={"A": A.vertices.tolist(), "B": B.vertices.tolist()},
        fast_support=shared_times(reference),
        fast_support_points=points,
        reference_support=reference,
        oracle_support=OracleSupport.PIECEWISE_LINEAR,
    )


def _piecewise_jump(params: Mapping[str, Any]) -> Multifunction:
    A = _body(params.get("A", _DEFAULT_TRIANGLE), "A")
    B = _body(params.get("B", [[-1.0, 0.0], [0.0, -1.0], [0.0, 0.0]]), "B")
    jump = float(params.get("jump", 0.5))
    if A.dim != B.dim:
        raise DimensionMismatchError(f"A is dim {A.dim}, B is dim {B.dim}")
    if not 0.0 < jump < 1.0:
        raise ValueError(f"jump: must lie in (0, 1), got {jump}")

    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        hA = support_matrix(A.vertices, directions)[:, None]
        hB = support_matrix(B.vertices, directions)[:, None]
        return np.where(ts < jump, hA, hB)

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        pA = support_points(A, directions)[None, :, :]
        pB = support_points(B, directions)[None, :, :]
        return np.where((ts < jump)[:, None, None], pA, pB)

    return Multifunction(
        name="piecewise_jump",
        dim=A.dim,
        evaluate=lambda t: A if t < jump else B,
        bound=max(circumradius(A), circumradius(B)),
        lipschitz=0.0,
        jumps=(jump,),
        params={"A": A.vertices.tolist(), "B": B.vertices.tolist(), "jump": jump},
        fast_support=shared_times(reference),
        fast_support_points=points,
        reference_support=reference,
        oracle_support=OracleSupport.PIECEWISE_LINEAR,
    )


# ---------------------------------------------------------------------------
# Single-valued integrands
# ---------------------------------------------------------------------------

# name -> (f, dim, M, L); f maps ts (n,) to points (n, dim).
_NAMED_FUNCTIONS: dict[str, tuple[Callable[[np.ndarray], np.ndarray], int, float, float]] = {
    "identity": (lambda t: t[:, None], 1, 1.0, 1.0),
    "square": (lambda t: (t**2)[:, None], 1, 1.0, 2.0),
    "cubic": (lambda t: (t**3)[:, None], 1, 1.0, 3.0),
    "exp": (lambda t: np.exp(t)[:, None], 1, float(np.e), float(np.e)),
    "sine": (lambda t: np.sin(np.pi * t)[:, None], 1, 1.0, float(np.pi)),
    "circle": (
        lambda t: np.column_stack([np.cos(2.0 * np.pi * t), np.sin(2.0 * np.pi * t)]),
        2,
        1.0,
        float(2.0 * np.pi),
    ),
}


def _polynomial(coefficients: Any) -> tuple[Callable[[np.ndarray], np.ndarray], int, float, float]:
    coeffs = [np.asarray(c, dtype=float) for c in coefficients]
    if not 1 <= len(coeffs) <= 3 or any(c.ndim != 1 or c.size == 0 for c in coeffs):
        raise ValueError("coefficients: need 1 to 3 nonempty coefficient lists, one per coordinate")

    def f(t: np.ndarray) -> np.ndarray:
        return np.column_stack([np.polynomial.polynomial.polyval(t, c) for c in coeffs])

    bound = float(np.linalg.norm([np.abs(c).sum() for c in coeffs]))
    lipschitz = float(np.linalg.norm([np.abs(c * np.arange(c.size)).sum() for c in coeffs]))
    return f, len(coeffs), bound, lipschitz


def _single_valued_wrap(params: Mapping[str, Any]) -> Multifunction:
    fname = str(params.get("function", "identity"))
    if fname == "polynomial":
        f, dim, bound, lipschitz = _polynomial(params.get("coefficients", [[0.0, 1.0]]))
        stored: dict[str, Any] = {
            "function": fname,
            "coefficients": [list(map(float, c)) for c in params.get("coefficients", [[0.0, 1.0]])],
        }
    elif fname in _NAMED_FUNCTIONS:
        f, dim, bound, lipschitz = _NAMED_FUNCTIONS[fname]
        stored = {"function": fname}
    else:
        known = ", ".join([*_NAMED_FUNCTIONS, "polynomial"])
        raise ValueError(f"function: unknown function {fname!r} (known: {known})")

    def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        ts = np.asarray(ts, dtype=float)
        shape = np.broadcast_shapes(ts.shape, (len(directions), 1))
        flat = np.broadcast_to(ts, shape)
        values = f(flat.ravel()).reshape(*shape, dim)
        return np.einsum("kd,knd->kn", directions, values)

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        p = f(ts)
        return np.broadcast_to(p[:, None, :], (len(ts), len(directions), dim)).copy()

    return Multifunction(
        name="single_valued_wrap",
        dim=dim,
        evaluate=lambda t: point_body(f(np.array([t]))[0]),
        bound=bound,
        lipschitz=lipschitz,
        params=stored,
        fast_support=lambda directions, ts: f(ts) @ directions.T,
        fast_support_points=points,
        reference_support=reference,
        oracle_support=OracleSupport.ANALYTIC,
    )


_BUILDERS: dict[str, Callable[[Mapping[str, Any]], Multifunction]] = {
    "constant_K": _constant_K,
    "segment_growth": _segment_growth,
    "scaled_disk": _scaled_disk,
    "rotating_segment": _rotating_segment,
    "polytope_interp": _polytope_interp,
    "piecewise_jump": _piecewise_jump,
    "single_valued_wrap": _single_valued_wrap,
}


@functools.lru_cache(maxsize=128)
def _cached(name: str, params_json: str) -> Multifunction:
    F = _BUILDERS[name](json.loads(params_json))
    verify(F)
    logger.debug("catalog entry %s verified (M=%s, L=%s)", name, F.bound, F.lipschitz)
    return F


def catalog(name: str, params: Mapping[str, Any] | None = None) -> Multifunction:
    """Build the named multifunction and verify its declared metadata.

    Args:
        name (str): One of ``CATALOG_NAMES``.
        params (Mapping | None): Entry parameters, e.g. ``{"A": [[0, 0], ...]}``.

    Returns:
        Multifunction: The verified entry.

    Raises:
        UnknownCatalogEntryError: If ``name`` is not in the catalog.
        MetadataViolationError: If declared M or L fails verification.
    """
    if name not in _BUILDERS:
        raise UnknownCatalogEntryError(
            f"unknown catalog entry {name!r}; expected one of {', '.join(CATALOG_NAMES)}"
        )
    return _cached(name, json.dumps(dict(params or {}), sort_keys=True))

