"""Committed oracle fixtures: build, render, load and drift-check.

One JSON file per entry under ``settings.fixtures_dir`` (``SETINT_FIXTURES``).
The oracle version hash covers everything that determines the values: the
library version, the entry and its params, the domain, the grid and the
quadrature resolution. Regenerate with ``setint regen-fixtures``.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, ValidationError

from domain import IntervalSet
from geometry.embedding import SupportVector, direction_grid
from multifunctions import catalog
from oracle.reference import OracleResult, oracle_integral
from shared.config import LIBRARY_VERSION, settings
from shared.errors import FixtureError

logger = logging.getLogger(__name__)

# Largest accepted change of a committed value on regeneration.
DRIFT_TOLERANCE = 1e-11


@dataclass(frozen=True)
class FixtureEntry:
    """A catalog entry and domain that ships a fixture file named ``{id}.json``."""

    id: str
    name: str
    params: dict[str, Any] = field(default_factory=dict)
    domain: tuple[tuple[float, float], ...] = ((0.0, 1.0),)

    @property
    def filename(self) -> str:
        return f"{self.id}.json"

    def interval_set(self) -> IntervalSet:
        return IntervalSet.from_list(self.domain)


FIXTURE_ENTRIES: tuple[FixtureEntry, ...] = (
    FixtureEntry("constant_K", "constant_K"),
    FixtureEntry("segment_growth", "segment_growth"),
    FixtureEntry("scaled_disk", "scaled_disk"),
    FixtureEntry("rotating_segment", "rotating_segment"),
    FixtureEntry("polytope_interp", "polytope_interp"),
    FixtureEntry("piecewise_jump", "piecewise_jump"),
    FixtureEntry("sine", "single_valued_wrap", {"function": "sine"}),
    FixtureEntry("circle", "single_valued_wrap", {"function": "circle"}),
    FixtureEntry("segment_growth_split", "segment_growth", domain=((0.0, 0.25), (0.5, 1.0))),
)


class _GridSpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    dim: int
    m: int


class FixtureFile(BaseModel):
    """On-disk layout of one oracle fixture."""

    model_config = ConfigDict(extra="forbid")

    id: str
    entry: str
    params: dict[str, Any]
    domain: list[list[float]]
    grid: _GridSpec
    panels: int
    order: int
    values: list[float]
    errors: list[float]
    error: float
    library_version: str
    oracle_version: str


def oracle_version(
    entry: FixtureEntry, m: int, panels: int, order: int, library_version: str = LIBRARY_VERSION
) -> str:
    """sha256 over the inputs that determine a fixture's values."""
    payload = {
        "library_version": library_version,
        "id": entry.id,
        "entry": entry.name,
        "params": entry.params,
        "domain": [list(map(float, pair)) for pair in entry.domain],
        "m": m,
        "panels": panels,
        "order": order,
    }
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


def build_fixture(entry: FixtureEntry, workers: int = 1) -> FixtureFile:
    F = catalog(entry.name, entry.params)
    o = oracle_integral(F, entry.interval_set(), workers=workers)
    return FixtureFile(
        id=entry.id,
        entry=entry.name,
        params=entry.params,
        domain=[list(map(float, pair)) for pair in entry.domain],
        grid=_GridSpec(dim=o.grid.dim, m=o.grid.resolution),
        panels=o.panels,
        order=o.quadrature_order,
        values=o.support_values.values.tolist(),
        errors=o.errors.tolist(),
        error=o.per_direction_error,
        library_version=LIBRARY_VERSION,
        oracle_version=oracle_version(entry, o.grid.resolution, o.panels, o.quadrature_order),
    )


def render(fixture: FixtureFile) -> str:
    return json.dumps(fixture.model_dump(), sort_keys=True, indent=2) + "\n"


def write_fixtures(
    directory: Path | None = None,
    entries: tuple[FixtureEntry, ...] = FIXTURE_ENTRIES,
    workers: int = 1,
) -> list[Path]:
    """Regenerate every fixture file; returns the written paths."""
    out = settings.fixtures_dir if directory is None else directory
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for entry in entries:
        path = out / entry.filename
        path.write_text(render(build_fixture(entry, workers)), encoding="utf-8")
        logger.info("wrote oracle fixture %s", path)
        written.append(path)
    return written


def load_fixture(path: Path) -> tuple[FixtureFile, OracleResult]:
    """Parse a fixture file and rebuild its ``OracleResult``.

    Raises:
        FixtureError: If the file is unreadable, malformed, or its hash does
            not match its own recorded inputs.
    """
    try:
        fixture = FixtureFile.model_validate_json(path.read_text(encoding="utf-8"))
    except (OSError, ValidationError) as e:
        raise FixtureError(f"{path}: {e}") from e
    entry = FixtureEntry(
        fixture.id,
        fixture.entry,
        fixture.params,
        tuple((float(a), float(b)) for a, b in fixture.domain),
    )
    expected = oracle_version(
        entry, fixture.grid.m, fixture.panels, fixture.order, fixture.library_version
    )
    if expected != fixture.oracle_version:
        raise FixtureError(f"{path}: oracle version hash does not match the recorded inputs")
    grid = direction_grid(fixture.grid.dim, fixture.grid.m)
    result = OracleResult(
        SupportVector(grid, fixture.values),
        fixture.order,
        fixture.panels,
        fixture.error,
        np.asarray(fixture.errors, dtype=float),
    )
    return fixture, result


def check_fixtures(
    directory: Path | None = None,
    entries: tuple[FixtureEntry, ...] = FIXTURE_ENTRIES,
    workers: int = 1,
) -> list[str]:
    """Problems found by recomputing every fixture; empty when all are current."""
    base = settings.fixtures_dir if directory is None else directory
    problems = []
    for entry in entries:
        path = base / entry.filename
        if not path.exists():
            problems.append(f"missing fixture {path}")
            continue
        try:
            stored, _ = load_fixture(path)
        except FixtureError as e:
            problems.append(str(e))
            continue
        fresh = build_fixture(entry, workers)
        if stored.oracle_version != fresh.oracle_version:
            problems.append(f"{path}: stale oracle version, regenerate")
            continue
        drift = float(np.max(np.abs(np.subtract(stored.values, fresh.values))))
        if drift > DRIFT_TOLERANCE:
            problems.append(f"{path}: values drifted by {drift:.3e}")
    return problems
