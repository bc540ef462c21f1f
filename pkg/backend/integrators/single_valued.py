"""Single-valued integrals as the degenerate case of the multivalued ones."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from domain import IntervalSet
from integrators.birkhoff import birkhoff_integrate
from integrators.mcshane import mcshane_integrate
from integrators.pettis import pettis_integrate
from integrators.results import IntegralResult, Tolerances
from multifunctions import Selection, point_valued
from shared.enums import Method

_INTEGRATORS = {
    Method.MCSHANE: mcshane_integrate,
    Method.BIRKHOFF: birkhoff_integrate,
    Method.PETTIS: pettis_integrate,
}


@dataclass(frozen=True)
class SingleValuedResult:
    point: np.ndarray
    error_estimate: float
    result: IntegralResult

    def to_dict(self) -> dict[str, Any]:
        return {
            "point": self.point.tolist(),
            "error_estimate": self.error_estimate,
            "result": self.result.to_dict(),
        }


def single_valued_integrate(
    f: Selection,
    A: IntervalSet,
    tol: Tolerances,
    method: Method = Method.MCSHANE,
    workers: int = 1,
) -> SingleValuedResult:
    """∫_A f dμ by running the multivalued integrator on t ↦ {f(t)}.

    The returned point is the vertex of the resulting body; a Pettis run may
    return a polygon of roundoff size, whose vertex mean is used.

    Raises:
        ValueError: For the Aumann method, which has no single-valued form here.
    """
    if method not in _INTEGRATORS:
        raise ValueError(f"no single-valued path for {method}")
    result = _INTEGRATORS[method](point_valued(f), A, tol, workers)
    vertices = result.value.vertices
    point = vertices.mean(axis=0)
    spread = float(np.max(np.linalg.norm(vertices - point, axis=1)))
    return SingleValuedResult(point, result.error_estimate + spread, result)
