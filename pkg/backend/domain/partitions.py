"""Tagged partitions of [0, 1]: gauge-fine McShane partitions and dyadic Birkhoff chains."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

import numpy as np

from domain.gauges import Gauge
from domain.intervals import IntervalSet
from shared.enums import PartitionKind, Tagging
from shared.errors import DepthLimitError, UnboundedGaugeRefusedError

logger = logging.getLogger(__name__)

MAX_DYADIC_DEPTH = 30

# Generous cap on McShane cells; far above anything a catalog gauge produces.
_MAX_CELLS = 2_000_000


@dataclass(frozen=True)
class Cell:
    set: IntervalSet
    tag: float


@dataclass(frozen=True)
class TaggedPartition:
    """Finite disjoint cells with tags.

    McShane tags may sit outside their cells; Birkhoff tags may not, and a
    Birkhoff partition covers [0, 1) exactly. ``leak`` is the uncovered measure.
    """

    cells: tuple[Cell, ...]
    kind: PartitionKind
    leak: float = 0.0

    def __post_init__(self) -> None:
        pieces = sorted((a, b) for cell in self.cells for a, b in cell.set.intervals)
        for (_, b), (c, _) in zip(pieces, pieces[1:]):
            if c < b:
                raise ValueError("partition cells overlap")
        covered = sum(cell.set.measure for cell in self.cells)
        if self.kind == PartitionKind.BIRKHOFF:
            if abs(covered - 1.0) > 1e-12:
                raise ValueError(f"a Birkhoff partition must cover [0, 1), covers {covered}")
            for cell in self.cells:
                if not cell.set.contains(cell.tag):
                    raise ValueError(f"Birkhoff tag {cell.tag} lies outside its cell")
        elif abs(covered + self.leak - 1.0) > 1e-9:
            raise ValueError(f"covered measure {covered} plus leak {self.leak} is not 1")

    @property
    def covered(self) -> float:
        return float(sum(cell.set.measure for cell in self.cells))

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(lo, hi, tag) per cell; only valid when every cell is one interval."""
        if any(len(cell.set.intervals) != 1 for cell in self.cells):
            raise ValueError("arrays() needs single-interval cells")
        lo = np.array([cell.set.intervals[0][0] for cell in self.cells])
        hi = np.array([cell.set.intervals[0][1] for cell in self.cells])
        tags = np.array([cell.tag for cell in self.cells])
        return lo, hi, tags

    def weights(self, domain: IntervalSet) -> np.ndarray:
        """μ(Eᵢ ∩ A) for every cell."""
        out = np.zeros(len(self.cells))
        for i, cell in enumerate(self.cells):
            out[i] = cell.set.intersect(domain).measure
        return out

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": str(self.kind),
            "leak": self.leak,
            "cells": [{"intervals": c.set.to_list(), "tag": c.tag} for c in self.cells],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TaggedPartition:
        cells = tuple(
            Cell(IntervalSet.from_list(c["intervals"]), float(c["tag"])) for c in data["cells"]
        )
        return cls(cells, PartitionKind(data["kind"]), float(data.get("leak", 0.0)))


def is_fine(p: TaggedPartition, g: Gauge) -> bool:
    """True iff every cell's interval hull lies inside (tag − r(tag), tag + r(tag))."""
    for cell in p.cells:
        if cell.set.is_empty:
            continue
        lo, hi = cell.set.hull()
        r = g.radius(cell.tag)
        if not (lo > cell.tag - r and hi <= cell.tag + r):
            return False
    return True


def _midpoint_width(g: Gauge, a: float) -> float:
    # Terminates: once rho < 2·r_min the half-width is below every radius.
    rho = min(g.radius(a), 1.0 - a)
    while rho / 2.0 >= g.radius(a + rho / 2.0):
        rho /= 2.0
    return rho


def generate_mcshane_partition(
    g: Gauge,
    leak: float = 0.0,
    seed: int = 0,
    tagging: Tagging = Tagging.RANDOM,
) -> TaggedPartition:
    """Build a Δ-fine McShane partition of [0, 1] left to right.

    With random tagging, at position ``a`` the tag is drawn from
    [a − r_min/2, a + r_min/2] ∩ [0, 1] (left of ``a``, hence outside the
    cell, with probability ½) and the cell is [a, min(t + r(t), 1)). Since
    r(t) ≥ r_min every cell is at least r_min/2 long unless it hits 1. With
    midpoint tagging the cell is centred on its tag.

    The walk stops once the uncovered tail is at most ``leak``.

    Args:
        g (Gauge): Gauge with a recorded ``r_min``.
        leak (float): Uncovered measure allowed at the right end, in [0, 1).
        seed (int): Seed for the tag draws.
        tagging (Tagging): Random (free) or midpoint tags.

    Returns:
        TaggedPartition: Partition of kind McShane.

    Raises:
        UnboundedGaugeRefusedError: If ``g`` records no positive ``r_min``.
    """
    r_min = g.r_min
    if r_min is None or r_min <= 0:
        raise UnboundedGaugeRefusedError(
            f"{type(g).__name__} records no positive lower bound; refusing to partition"
        )
    if not 0.0 <= leak < 1.0:
        raise ValueError(f"leak must lie in [0, 1), got {leak}")

    rng = np.random.default_rng(seed)
    cells: list[Cell] = []
    a = 0.0
    while a < 1.0 and 1.0 - a > leak:
        if tagging == Tagging.MIDPOINT:
            rho = _midpoint_width(g, a)
            b = min(a + rho, 1.0)
            t = a + (b - a) / 2.0
        else:
            if rng.random() < 0.5 and a > 0.0:
                t = float(rng.uniform(max(0.0, a - r_min / 2.0), a))
            else:
                t = float(rng.uniform(a, min(1.0, a + r_min / 2.0)))
            b = min(t + g.radius(t), 1.0)
        cells.append(Cell(IntervalSet(((a, b),)), t))
        a = b
        if len(cells) > _MAX_CELLS:
            raise RuntimeError(f"partition exceeded {_MAX_CELLS} cells; gauge too fine")
    uncovered = max(0.0, 1.0 - a)
    logger.debug("McShane partition: %d cells, leak %.3e", len(cells), uncovered)
    return TaggedPartition(tuple(cells), PartitionKind.MCSHANE, uncovered)


def generate_birkhoff_partition(k: int) -> list[IntervalSet]:
    """The dyadic cells [j·2⁻ᵏ, (j+1)·2⁻ᵏ), j = 0..2ᵏ−1.

    Raises:
        DepthLimitError: If ``k`` exceeds 30.
    """
    if k < 0:
        raise ValueError(f"depth must be nonnegative, got {k}")
    if k > MAX_DYADIC_DEPTH:
        raise DepthLimitError(f"dyadic depth {k} exceeds {MAX_DYADIC_DEPTH}")
    n = 2**k
    width = 2.0**-k
    return [IntervalSet(((j * width, (j + 1) * width),)) for j in range(n)]


def _lows_highs(cells: Sequence[IntervalSet]) -> tuple[np.ndarray, np.ndarray] | None:
    if all(len(c.intervals) == 1 for c in cells):
        return (
            np.array([c.intervals[0][0] for c in cells]),
            np.array([c.intervals[0][1] for c in cells]),
        )
    return None


def sample_tags(cells: Sequence[IntervalSet], count: int, seed: int) -> list[np.ndarray]:
    """``count`` tag assignments, one tag inside each cell.

    Entry 0 is the left endpoints and entry 1 the midpoints; the rest are drawn
    uniformly by measure from each cell.

    Raises:
        ValueError: If ``count`` < 1 or a cell is empty.
    """
    if count < 1:
        raise ValueError(f"count must be at least 1, got {count}")
    if any(c.is_empty for c in cells):
        raise ValueError("cannot tag an empty cell")
    rng = np.random.default_rng(seed)
    lows_highs = _lows_highs(cells)
    assignments: list[np.ndarray] = [
        np.array([c.intervals[0][0] for c in cells]),
        np.array([c.midpoint() for c in cells]),
    ]
    for _ in range(count - 2):
        u = rng.random(len(cells))
        if lows_highs is not None:
            lo, hi = lows_highs
            tags = np.minimum(lo + u * (hi - lo), np.nextafter(hi, lo))
        else:
            tags = np.array([c.point_at(ui * c.measure) for c, ui in zip(cells, u)])
        assignments.append(tags)
    return assignments[:count]
