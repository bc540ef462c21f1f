"""Report serialization.

Reports are deterministic text: sorted keys, fixed indentation, shortest
round-trip floats, no timestamps. Every report carries the scenario hash and
the library version.
"""

from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path
from typing import Any

from integrators import TracePoint
from shared.config import LIBRARY_VERSION

TRACE_COLUMNS = (
    "method",
    "refinement_param",
    "h_to_previous",
    "error_estimate",
    "evals",
    "note",
)
CONVERGENCE_COLUMNS = (
    "method",
    "refinement_param",
    "h_to_previous",
    "error_estimate",
    "evals",
    "h_to_oracle",
)


def envelope(kind: str, scenario_hash: str, body: dict[str, Any]) -> dict[str, Any]:
    return {
        "kind": kind,
        "library_version": LIBRARY_VERSION,
        "scenario_hash": scenario_hash,
        **body,
    }


def render_json(report: dict[str, Any]) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _cell(value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def render_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def trace_rows(method: str, trace: Iterable[TracePoint]) -> list[dict[str, Any]]:
    return [{"method": method, **tp.to_dict()} for tp in trace]


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    return path
