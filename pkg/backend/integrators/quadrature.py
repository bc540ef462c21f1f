"""Batched adaptive Simpson quadrature over many components at once.

Every column of the integrand is refined on its own: a node stays open for a
column until that column's Richardson estimate drops below the node tolerance.
A column's result therefore depends only on its own values, and nodes are kept
in left-to-right order so accumulation order is fixed.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np

from domain import IntervalSet

# ts (n,) -> values (n, K)
Integrand = Callable[[np.ndarray], np.ndarray]

SIMPSON_MAX_DEPTH = 24


@dataclass(frozen=True)
class QuadratureResult:
    values: np.ndarray
    errors: np.ndarray
    evaluations: int
    depth: int

    def __add__(self, other: QuadratureResult) -> QuadratureResult:
        return QuadratureResult(
            self.values + other.values,
            self.errors + other.errors,
            self.evaluations + other.evaluations,
            max(self.depth, other.depth),
        )


def _interleave(left: np.ndarray, right: np.ndarray) -> np.ndarray:
    out = np.empty((2 * len(left), *left.shape[1:]), dtype=left.dtype)
    out[0::2] = left
    out[1::2] = right
    return out


def adaptive_simpson(
    fn: Integrand,
    a: float,
    b: float,
    tol: float,
    max_depth: int = SIMPSON_MAX_DEPTH,
) -> QuadratureResult:
    """∫_a^b fn(t) dt for every column of ``fn``.

    The right endpoint is sampled one ulp inside the interval, so a jump at
    ``b`` belongs to the next piece. The node tolerance halves per level; a
    node at ``max_depth`` is accepted with its estimate.

    Args:
        fn (Integrand): Maps times (n,) to values (n, K).
        a (float): Lower limit.
        b (float): Upper limit, ``b`` ≥ ``a``.
        tol (float): Absolute tolerance per column.
        max_depth (int): Bisection limit.

    Returns:
        QuadratureResult: Values and error estimates of shape (K,).
    """
    if b < a:
        raise ValueError(f"limits out of order: [{a}, {b}]")
    first = np.asarray(fn(np.array([a, (a + b) / 2.0, np.nextafter(b, a)])), dtype=float)
    first = first.reshape(3, -1)
    K = first.shape[1]
    if b == a:
        return QuadratureResult(np.zeros(K), np.zeros(K), 3, 0)

    lo, hi = np.array([a]), np.array([b])
    fa, fm, fb = first[0:1], first[1:2], first[2:3]
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    active = np.ones((1, K), dtype=bool)
    total = np.zeros(K)
    error = np.zeros(K)
    evaluations = 3
    node_tol = tol
    depth = 0
    while lo.size:
        mid = (lo + hi) / 2.0
        n = len(lo)
        g = np.asarray(fn(np.concatenate([(lo + mid) / 2.0, (mid + hi) / 2.0])), dtype=float)
        g = g.reshape(2 * n, K)
        evaluations += 2 * n
        flm, frm = g[:n], g[n:]
        quarter = ((hi - lo) / 12.0)[:, None]
        left = quarter * (fa + 4.0 * flm + fm)
        right = quarter * (fm + 4.0 * frm + fb)
        estimate = (left + right - whole) / 15.0
        depth += 1
        done = active & ((np.abs(estimate) < node_tol) | (depth >= max_depth))
        total += np.where(done, left + right + estimate, 0.0).sum(axis=0)
        error += np.where(done, np.abs(estimate), 0.0).sum(axis=0)
        active &= ~done
        keep = active.any(axis=1)
        if not keep.any():
            break
        lo, mid, hi = lo[keep], mid[keep], hi[keep]
        fa, fm, fb, flm, frm = fa[keep], fm[keep], fb[keep], flm[keep], frm[keep]
        left, right, active = left[keep], right[keep], active[keep]
        lo, hi = _interleave(lo, mid), _interleave(mid, hi)
        fa, fm, fb = _interleave(fa, fm), _interleave(flm, frm), _interleave(fm, fb)
        whole = _interleave(left, right)
        active = _interleave(active, active)
        node_tol /= 2.0
    return QuadratureResult(total, error, evaluations, depth)


def domain_pieces(A: IntervalSet, breaks: Sequence[float] = ()) -> list[tuple[float, float]]:
    """The intervals of A split at every break point strictly inside them."""
    pieces = []
    for a, b in A.intervals:
        cuts = sorted(x for x in breaks if a < x < b)
        edges = [a, *cuts, b]
        pieces.extend(zip(edges[:-1], edges[1:]))
    return pieces


def integrate_pieces(
    fn: Integrand,
    pieces: Sequence[tuple[float, float]],
    tol: float,
    max_depth: int = SIMPSON_MAX_DEPTH,
) -> QuadratureResult:
    """Sum of ``adaptive_simpson`` over ``pieces``, sharing ``tol`` by length."""
    total_length = sum(b - a for a, b in pieces)
    result: QuadratureResult | None = None
    for a, b in pieces:
        part = adaptive_simpson(fn, a, b, tol * (b - a) / total_length, max_depth)
        result = part if result is None else result + part
    if result is None:
        raise ValueError("nothing to integrate: no pieces")
    return result
