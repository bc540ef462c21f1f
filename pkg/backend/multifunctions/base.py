"""Multifunctions F: [0, 1] → ck(ℝ^dim) with regularity metadata.

A ``Multifunction`` pairs an exact body evaluator with the metadata the
integrators rely on: a bound M on h(F(t), {0}), an optional Lipschitz constant
for the continuity pieces, the finite jump set, and optionally the closed-form
support function of the analytic integrand for the reference integrator.
"""

from __future__ import annotations

import logging
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from geometry import ConvexBody, minkowski_sum, origin, scale, support_points
from geometry.embedding import DirectionGrid, direction_grid, support_matrix
from shared.enums import OracleSupport
from shared.errors import (
    DimensionMismatchError,
    MetadataViolationError,
    NegativeScaleError,
    OracleUnavailableError,
)

logger = logging.getLogger(__name__)

# (directions (K, dim), ts (n,)) -> support values (n, K) of the realized bodies.
SupportFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
# (directions (K, dim), ts (n,)) -> support points (n, K, dim), lexicographic ties.
SupportPointFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
# (directions (K, dim), ts broadcastable to (K, n)) -> (K, n), each row at its own times.
ReferenceFn = Callable[[np.ndarray, np.ndarray], np.ndarray]
# directions (K, dim) -> (K, j) times in [0, 1] where the reference support has a kink, NaN for none.
KinkFn = Callable[[np.ndarray], np.ndarray]

VERIFICATION_POINTS = 1024
_VERIFICATION_DIRECTIONS = 720
LIPSCHITZ_SLACK = 1e-9


@dataclass(frozen=True, eq=False)
class Multifunction:
    """An evaluable convex-compact-valued map on [0, 1].

    ``evaluate`` must be pure and reentrant; integrators call it from many
    threads. ``realization_error`` bounds h between the realized polytope
    F(t) and the analytic body the reference support describes.
    """

    name: str
    dim: int
    evaluate: Callable[[float], ConvexBody]
    bound: float | None = None
    lipschitz: float | None = None
    jumps: tuple[float, ...] = ()
    params: Mapping[str, Any] = field(default_factory=dict)
    fast_support: SupportFn | None = None
    fast_support_points: SupportPointFn | None = None
    reference_support: ReferenceFn | None = None
    reference_kinks: KinkFn | None = None
    oracle_support: OracleSupport = OracleSupport.NONE
    realization_error: float = 0.0

    def __call__(self, t: float) -> ConvexBody:
        return self.evaluate(float(t))

    def support_values(self, directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """δ*(d_k, F(t_i)) as an (n, K) array."""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if self.fast_support is not None:
            return np.asarray(self.fast_support(directions, ts), dtype=float)
        if ts.size == 0:
            return np.zeros((0, len(directions)))
        return np.vstack([support_matrix(self(t).vertices, directions) for t in ts])

    def embedded(self, grid: DirectionGrid, ts: np.ndarray) -> np.ndarray:
        """Rows are the support vectors of F(t_i) on ``grid``."""
        if grid.dim != self.dim:
            raise DimensionMismatchError(f"dim-{self.dim} multifunction on a dim-{grid.dim} grid")
        return self.support_values(grid.directions, ts)

    def support_points(self, directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Lexicographically largest maximizers, an (n, K, dim) array."""
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        if self.fast_support_points is not None:
            return np.asarray(self.fast_support_points(directions, ts), dtype=float)
        if ts.size == 0:
            return np.zeros((0, len(directions), self.dim))
        return np.stack([support_points(self(t), directions) for t in ts])

    @property
    def has_oracle(self) -> bool:
        return self.reference_support is not None and self.oracle_support != OracleSupport.NONE

    def reference_values(self, directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        """Closed-form support of the analytic F, row k evaluated at ``ts[k]``.

        Raises:
            OracleUnavailableError: If no closed form is recorded.
        """
        if not self.has_oracle:
            raise OracleUnavailableError(f"{self.name} has no closed-form support")
        assert self.reference_support is not None
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        ts = np.asarray(ts, dtype=float)
        return np.asarray(self.reference_support(directions, ts), dtype=float)

    def kinks(self, directions: np.ndarray) -> np.ndarray:
        directions = np.atleast_2d(np.asarray(directions, dtype=float))
        if self.reference_kinks is None:
            return np.zeros((len(directions), 0))
        return np.atleast_2d(self.reference_kinks(directions))

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, **dict(self.params)}


def shared_times(reference: ReferenceFn) -> SupportFn:
    """The (n, K) support form of a reference support evaluated at common times."""

    def support(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return np.asarray(reference(directions, ts[None, :]), dtype=float).T

    return support


# ---------------------------------------------------------------------------
# Metadata verification
# ---------------------------------------------------------------------------


def verification_grid(points: int = VERIFICATION_POINTS) -> np.ndarray:
    return np.linspace(0.0, 1.0, points)


def _verification_directions(dim: int) -> np.ndarray:
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        angles = 2.0 * np.pi * np.arange(_VERIFICATION_DIRECTIONS) / _VERIFICATION_DIRECTIONS
        return np.column_stack([np.cos(angles), np.sin(angles)])
    return direction_grid(3, _VERIFICATION_DIRECTIONS).directions


def verify(F: Multifunction, points: int = VERIFICATION_POINTS) -> None:
    """Check declared metadata of ``F`` on a uniform grid of ``points`` times.

    The bound M is checked exactly against the vertex norms. The Lipschitz
    constant is checked on adjacent grid pairs that do not straddle a jump,
    using dense support samples, which never overstate h.

    Raises:
        MetadataViolationError: If a declared M or L fails on the grid.
    """
    ts = verification_grid(points)
    bodies = [F(t) for t in ts]
    for body in bodies:
        if body.dim != F.dim:
            raise MetadataViolationError(f"{F.name}: evaluated a dim-{body.dim} body, declared {F.dim}")
    if F.bound is not None:
        norms = np.array([np.max(np.linalg.norm(b.vertices, axis=1)) for b in bodies])
        worst = float(norms.max())
        if worst > F.bound * (1.0 + 1e-12) + 1e-12:
            logger.error("%s: declared bound %.6g, observed %.6g", F.name, F.bound, worst)
            raise MetadataViolationError(f"{F.name}: h(F(t), {{0}}) reaches {worst} > M = {F.bound}")
    if F.lipschitz is not None:
        dirs = _verification_directions(F.dim)
        values = F.support_values(dirs, ts)
        steps = np.max(np.abs(np.diff(values, axis=0)), axis=1)
        gaps = np.diff(ts)
        straddles = np.zeros(len(gaps), dtype=bool)
        for j in F.jumps:
            straddles |= (ts[:-1] < j) & (ts[1:] >= j)
        excess = steps - (F.lipschitz * gaps + LIPSCHITZ_SLACK)
        excess[straddles] = -np.inf
        if excess.size and float(excess.max()) > 0.0:
            i = int(np.argmax(excess))
            logger.error("%s: Lipschitz check failed between t=%.6g and t=%.6g", F.name, ts[i], ts[i + 1])
            raise MetadataViolationError(
                f"{F.name}: h(F(s), F(t)) ≥ {steps[i]:.6g} exceeds L|s−t| = {F.lipschitz * gaps[i]:.6g}"
            )


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------


def _add_optional(a: float | None, b: float | None) -> float | None:
    return None if a is None or b is None else a + b


def _combined_oracle(F: Multifunction, G: Multifunction) -> OracleSupport:
    if not (F.has_oracle and G.has_oracle):
        return OracleSupport.NONE
    if F.oracle_support == G.oracle_support == OracleSupport.PIECEWISE_LINEAR:
        return OracleSupport.PIECEWISE_LINEAR
    return OracleSupport.ANALYTIC


def sum_multifunctions(F: Multifunction, G: Multifunction) -> Multifunction:
    """Pointwise Minkowski sum t ↦ F(t) ⊕ G(t); metadata adds up.

    Raises:
        DimensionMismatchError: If F and G have different dimensions.
    """
    if F.dim != G.dim:
        raise DimensionMismatchError(f"cannot add dim-{F.dim} and dim-{G.dim} multifunctions")

    def support(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return F.support_values(directions, ts) + G.support_values(directions, ts)

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return F.support_points(directions, ts) + G.support_points(directions, ts)

    oracle = _combined_oracle(F, G)
    reference = None
    kinks = None
    if oracle != OracleSupport.NONE:

        def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
            return F.reference_values(directions, ts) + G.reference_values(directions, ts)

        def kinks(directions: np.ndarray) -> np.ndarray:
            return np.hstack([F.kinks(directions), G.kinks(directions)])

    return Multifunction(
        name=f"sum({F.name},{G.name})",
        dim=F.dim,
        evaluate=lambda t: minkowski_sum(F(t), G(t)),
        bound=_add_optional(F.bound, G.bound),
        lipschitz=_add_optional(F.lipschitz, G.lipschitz),
        jumps=tuple(sorted(set(F.jumps) | set(G.jumps))),
        params={"terms": [F.to_dict(), G.to_dict()]},
        fast_support=support,
        fast_support_points=points,
        reference_support=reference,
        reference_kinks=kinks,
        oracle_support=oracle,
        realization_error=F.realization_error + G.realization_error,
    )


def scale_multifunction(F: Multifunction, lam: float) -> Multifunction:
    """t ↦ λ·F(t) for λ ≥ 0.

    Raises:
        NegativeScaleError: If ``lam`` < 0.
    """
    if lam < 0:
        raise NegativeScaleError(f"scale factor must be nonnegative, got {lam}")
    lam = float(lam)

    def support(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        return lam * F.support_values(directions, ts)

    def points(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
        if lam == 0.0:
            return np.zeros((len(np.atleast_1d(ts)), len(np.atleast_2d(directions)), F.dim))
        return lam * F.support_points(directions, ts)

    reference = None
    if F.has_oracle:

        def reference(directions: np.ndarray, ts: np.ndarray) -> np.ndarray:
            return lam * F.reference_values(directions, ts)

    return Multifunction(
        name=f"scale({lam!r},{F.name})",
        dim=F.dim,
        evaluate=lambda t: scale(F(t), lam) if lam > 0 else origin(F.dim),
        bound=None if F.bound is None else lam * F.bound,
        lipschitz=None if F.lipschitz is None else lam * F.lipschitz,
        jumps=F.jumps if lam > 0 else (),
        params={"factor": lam, "term": F.to_dict()},
        fast_support=support,
        fast_support_points=points,
        reference_support=reference,
        reference_kinks=F.reference_kinks if F.has_oracle else None,
        oracle_support=F.oracle_support if F.has_oracle else OracleSupport.NONE,
        realization_error=lam * F.realization_error,
    )
