"""Run tolerances and integration results.

Validation split: ``Tolerances`` is a Pydantic model because it arrives from
scenario files and the environment. Results hold numpy-backed bodies and stay
plain dataclasses with explicit ``to_dict`` serializers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from pydantic import BaseModel, ConfigDict, Field

from geometry import ConvexBody
from geometry.embedding import DirectionGrid
from shared.config import settings
from shared.enums import Method


class Tolerances(BaseModel):
    """Targets and budgets for one integrator run.

    Unset fields fall back to ``settings.tolerances``; the seed is always
    explicit so no run is ever seeded from the clock.
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    epsilon_target: float = Field(
        default_factory=lambda: settings.tolerances.epsilon_target, gt=0.0
    )
    max_depth: int = Field(default_factory=lambda: settings.tolerances.max_depth, ge=1, le=30)
    tag_samples: int = Field(default_factory=lambda: settings.tolerances.tag_samples, ge=1)
    directions: int = Field(default_factory=lambda: settings.tolerances.directions, ge=2)
    leak: float = Field(default_factory=lambda: settings.tolerances.leak, ge=0.0, lt=1.0)
    seed: int = Field(ge=0)

    @classmethod
    def from_settings(cls, **overrides: Any) -> Tolerances:
        """Tolerances from the environment defaults, seed included."""
        return cls(**{"seed": settings.tolerances.seed, **overrides})


@dataclass(frozen=True)
class TracePoint:
    """One refinement level: the parameter (depth k or direction count m),
    the h-distance to the previous level's value, and the estimate then."""

    refinement: float
    h_to_previous: float | None
    error_estimate: float
    evaluations: int
    note: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "refinement_param": self.refinement,
            "h_to_previous": self.h_to_previous,
            "error_estimate": self.error_estimate,
            "evals": self.evaluations,
            "note": self.note,
        }


@dataclass(frozen=True)
class LevelOutcome:
    """A single refinement level of an iterated integrator.

    ``estimate`` is the stopping quantity of the level; ``value`` the body the
    level would report.
    """

    refinement: float
    value: ConvexBody
    estimate: float
    evaluations: int
    rigorous: bool = True
    details: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class IntegralResult:
    """A computed integral with its claimed error bound and convergence trace.

    ``intermediates[i]`` is the value reported at ``trace[i]``, so every
    ``h_to_previous`` can be recomputed from the result alone.
    """

    value: ConvexBody
    method: Method
    error_estimate: float
    trace: tuple[TracePoint, ...]
    evaluations: int
    grid: DirectionGrid
    rigorous: bool = True
    intermediates: tuple[ConvexBody, ...] = ()
    details: dict[str, float] = field(default_factory=dict)

    @property
    def budget_used(self) -> int:
        return self.evaluations

    def to_dict(self) -> dict[str, Any]:
        return {
            "method": str(self.method),
            "value": self.value.to_dict(),
            "error_estimate": self.error_estimate,
            "budget_used": self.evaluations,
            "rigorous": self.rigorous,
            "grid": self.grid.to_dict(),
            "trace": [tp.to_dict() for tp in self.trace],
            "intermediates": [body.to_dict() for body in self.intermediates],
            "details": dict(sorted(self.details.items())),
        }
