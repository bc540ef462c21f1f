"""Scenario files: what to integrate, where, with which integrators."""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from domain import IntervalSet
from integrators import Tolerances
from multifunctions import CATALOG_NAMES, Multifunction, catalog
from shared.enums import Method, ReportFormat
from shared.errors import ScenarioError


class _StrictModel(BaseModel):
    """Base for scenario models: reject unknown fields."""

    model_config = ConfigDict(extra="forbid")


class MultifunctionSpec(BaseModel):
    """A catalog name; every other key is passed to the entry as a param."""

    model_config = ConfigDict(extra="allow")

    name: str

    @field_validator("name")
    @classmethod
    def _known(cls, v: str) -> str:
        if v not in CATALOG_NAMES:
            known = ", ".join(CATALOG_NAMES)
            raise ValueError(f"unknown catalog entry {v!r}; expected one of {known}")
        return v

    @property
    def params(self) -> dict[str, Any]:
        return dict(self.model_extra or {})

    def build(self) -> Multifunction:
        return catalog(self.name, self.params)


class OutputSpec(_StrictModel):
    prefix: str = Field(default="run", min_length=1, pattern=r"^[A-Za-z0-9_.-]+$")
    format: ReportFormat = ReportFormat.JSON


class Scenario(_StrictModel):
    multifunction: MultifunctionSpec
    domain: list[tuple[float, float]] = Field(default_factory=lambda: [(0.0, 1.0)])
    integrators: list[Method] = Field(min_length=1)
    tolerances: Tolerances
    output: OutputSpec = Field(default_factory=OutputSpec)

    @field_validator("domain")
    @classmethod
    def _valid_domain(cls, v: list[tuple[float, float]]) -> list[tuple[float, float]]:
        IntervalSet.from_list(v)
        return v

    @field_validator("integrators")
    @classmethod
    def _distinct(cls, v: list[Method]) -> list[Method]:
        if len(set(v)) != len(v):
            raise ValueError("integrators must not repeat")
        return v

    def interval_set(self) -> IntervalSet:
        return IntervalSet.from_list(self.domain)

    def canonical_json(self) -> str:
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))

    @property
    def scenario_hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def _field_errors(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        parts.append(f"{loc}: {err['msg']}")
    return "; ".join(parts)


def parse_scenario(text: str, source: str = "<scenario>") -> Scenario:
    """Validate scenario JSON text.

    Raises:
        ScenarioError: With line and column for malformed JSON, or the dotted
            field path for invalid content.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{source}:{e.lineno}:{e.colno}: {e.msg}") from e
    try:
        return Scenario.model_validate(data)
    except ValidationError as e:
        raise ScenarioError(f"{source}: {_field_errors(e)}") from e


def load_scenario(path: Path) -> Scenario:
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"{path}: {e.strerror}") from e
    return parse_scenario(text, str(path))
