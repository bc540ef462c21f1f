"""Finite unions of half-open intervals inside [0, 1)."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np


@dataclass(frozen=True)
class IntervalSet:
    """Sorted, pairwise disjoint half-open intervals [a, b) with 0 ≤ a < b ≤ 1.

    Overlapping or touching input intervals are merged; empty ones dropped.
    """

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self) -> None:
        cleaned: list[tuple[float, float]] = []
        for a, b in sorted((float(a), float(b)) for a, b in self.intervals):
            if not 0.0 <= a <= b <= 1.0:
                raise ValueError(f"interval [{a}, {b}) is not inside [0, 1]")
            if a == b:
                continue
            if cleaned and a <= cleaned[-1][1]:
                cleaned[-1] = (cleaned[-1][0], max(cleaned[-1][1], b))
            else:
                cleaned.append((a, b))
        object.__setattr__(self, "intervals", tuple(cleaned))

    @classmethod
    def of(cls, *pairs: Sequence[float]) -> IntervalSet:
        return cls(tuple((float(p[0]), float(p[1])) for p in pairs))

    @classmethod
    def unit(cls) -> IntervalSet:
        return cls(((0.0, 1.0),))

    @classmethod
    def empty(cls) -> IntervalSet:
        return cls(())

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def starts(self) -> np.ndarray:
        return np.array([a for a, _ in self.intervals])

    @property
    def ends(self) -> np.ndarray:
        return np.array([b for _, b in self.intervals])

    def hull(self) -> tuple[float, float]:
        """Smallest interval [lo, hi) containing the set."""
        if self.is_empty:
            raise ValueError("the empty set has no interval hull")
        return self.intervals[0][0], self.intervals[-1][1]

    def contains(self, t: float) -> bool:
        return any(a <= t < b for a, b in self.intervals)

    def intersect(self, other: IntervalSet) -> IntervalSet:
        pieces = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    pieces.append((lo, hi))
        return IntervalSet(tuple(pieces))

    def is_subset_of(self, other: IntervalSet) -> bool:
        return abs(self.intersect(other).measure - self.measure) <= 1e-15

    def overlap_measures(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        """μ([lo_i, hi_i) ∩ self) for each pair, vectorized."""
        if self.is_empty:
            return np.zeros(len(lo))
        left = np.maximum(np.asarray(lo)[:, None], self.starts[None, :])
        right = np.minimum(np.asarray(hi)[:, None], self.ends[None, :])
        return np.clip(right - left, 0.0, None).sum(axis=1)

    def point_at(self, mass: float) -> float:
        """The point t with μ([0, t) ∩ self) = mass, for 0 ≤ mass < measure."""
        remaining = mass
        for a, b in self.intervals:
            if remaining < b - a:
                return a + remaining
            remaining -= b - a
        raise ValueError(f"mass {mass} is not below the measure {self.measure}")

    def midpoint(self) -> float:
        """The measure-median point; the midpoint for a single interval."""
        return self.point_at(self.measure / 2.0)

    def breakpoints(self) -> list[float]:
        return sorted({x for pair in self.intervals for x in pair})

    def to_list(self) -> list[list[float]]:
        return [[a, b] for a, b in self.intervals]

    @classmethod
    def from_list(cls, data: Iterable[Any]) -> IntervalSet:
        pairs = []
        for item in data:
            if len(item) != 2:
                raise ValueError(f"interval {item!r} must be a pair [a, b]")
            pairs.append((float(item[0]), float(item[1])))
        return cls(tuple(pairs))
