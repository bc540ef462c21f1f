"""Gauges: positive radius functions t ↦ r(t) realizing Δ(t) = (t − r, t + r) ∩ [0, 1].

Catalog gauges record a positive lower bound ``r_min``; that witness is what
makes fine-partition construction terminate.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np


class Gauge(ABC):
    """A radius function with an optional recorded lower bound."""

    @abstractmethod
    def radius(self, t: float) -> float: ...

    @property
    @abstractmethod
    def r_min(self) -> float | None: ...

    def radius_many(self, ts: np.ndarray) -> np.ndarray:
        return np.array([self.radius(float(t)) for t in ts])

    def neighborhood(self, t: float) -> tuple[float, float]:
        """Δ(t) as an open interval clipped to [0, 1]."""
        r = self.radius(t)
        return max(0.0, t - r), min(1.0, t + r)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": type(self).__name__}


@dataclass(frozen=True)
class ConstantGauge(Gauge):
    r0: float

    def __post_init__(self) -> None:
        if self.r0 <= 0:
            raise ValueError(f"gauge radius must be positive, got {self.r0}")

    def radius(self, t: float) -> float:
        return self.r0

    @property
    def r_min(self) -> float:
        return self.r0

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "constant", "r0": self.r0}


@dataclass(frozen=True)
class PiecewiseConstantGauge(Gauge):
    """Radius ``radii[i]`` on [breaks[i], breaks[i+1]); breaks span [0, 1]."""

    breaks: tuple[float, ...]
    radii: tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.breaks) != len(self.radii) + 1:
            raise ValueError("need one more break than radii")
        if self.breaks[0] != 0.0 or self.breaks[-1] != 1.0:
            raise ValueError("breaks must start at 0 and end at 1")
        if any(b <= a for a, b in zip(self.breaks, self.breaks[1:])):
            raise ValueError("breaks must be strictly increasing")
        if min(self.radii) <= 0:
            raise ValueError("gauge radii must be positive")

    def radius(self, t: float) -> float:
        i = int(np.searchsorted(self.breaks, t, side="right")) - 1
        return self.radii[min(max(i, 0), len(self.radii) - 1)]

    @property
    def r_min(self) -> float:
        return min(self.radii)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "piecewise", "breaks": list(self.breaks), "radii": list(self.radii)}


@dataclass(frozen=True)
class DistanceGauge(Gauge):
    """r(t) = max(r_min, c·dist(t, S)), optionally capped at ``r_max``."""

    singular: tuple[float, ...]
    c: float
    r_floor: float
    r_max: float | None = None

    def __post_init__(self) -> None:
        if not self.singular:
            raise ValueError("a distance-modulated gauge needs a singular set")
        if self.c <= 0 or self.r_floor <= 0:
            raise ValueError("c and r_min must be positive")

    def radius(self, t: float) -> float:
        dist = min(abs(t - s) for s in self.singular)
        r = max(self.r_floor, self.c * dist)
        return r if self.r_max is None else min(r, self.r_max)

    @property
    def r_min(self) -> float:
        return self.r_floor if self.r_max is None else min(self.r_floor, self.r_max)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "distance",
            "singular": list(self.singular),
            "c": self.c,
            "r_min": self.r_floor,
            "r_max": self.r_max,
        }


@dataclass(frozen=True)
class CallableGauge(Gauge):
    """An arbitrary radius function with no recorded lower bound."""

    fn: Callable[[float], float]

    def radius(self, t: float) -> float:
        return float(self.fn(t))

    @property
    def r_min(self) -> None:
        return None


def refinement_gauge(level: int, jumps: Sequence[float] = ()) -> Gauge:
    """The level-k gauge of the McShane schedule: 2⁻ᵏ, shrunk near jump points."""
    r = 2.0**-level
    if not jumps:
        return ConstantGauge(r)
    return DistanceGauge(tuple(jumps), c=0.5, r_floor=max(r * r, 1e-9), r_max=r)
