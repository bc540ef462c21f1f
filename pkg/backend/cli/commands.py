"""Subcommand implementations. Each returns a process exit code."""

from __future__ import annotations

import hashlib
import json
import logging
from collections.abc import Callable
from enum import IntEnum
from pathlib import Path
from typing import Any

from cli.reports import (
    CONVERGENCE_COLUMNS,
    TRACE_COLUMNS,
    envelope,
    render_csv,
    render_json,
    trace_rows,
    write_text,
)
from cli.scenario import Scenario
from domain import IntervalSet
from geometry import ConvexBody, hausdorff_distance
from geometry.embedding import direction_grid
from integrators import (
    IntegralResult,
    LevelOutcome,
    Tolerances,
    birkhoff_level,
    compare_all,
    mcshane_level,
)
from integrators.compare import INTEGRATORS
from integrators.riemann import jump_sizes
from multifunctions import Multifunction, catalog
from oracle import (
    OracleResult,
    check_fixtures,
    dense_distance,
    oracle_distance,
    oracle_integral,
    write_fixtures,
)
from shared.enums import Method, ReportFormat
from shared.errors import NoConvergenceError, SetIntError, UnsupportedDimensionError

logger = logging.getLogger(__name__)


class ExitCode(IntEnum):
    OK = 0
    INVALID_INPUT = 1
    NO_CONVERGENCE = 2
    VIOLATION = 3


def _writes_json(fmt: ReportFormat) -> bool:
    return fmt in (ReportFormat.JSON, ReportFormat.BOTH)


def _writes_csv(fmt: ReportFormat) -> bool:
    return fmt in (ReportFormat.CSV, ReportFormat.BOTH)


def _build(scenario: Scenario) -> tuple[Multifunction, IntervalSet]:
    return scenario.multifunction.build(), scenario.interval_set()


# ---------------------------------------------------------------------------
# integrate
# ---------------------------------------------------------------------------


def run_integrate(
    scenario: Scenario, out: Path, workers: int = 1, fmt: ReportFormat | None = None
) -> int:
    """One report per requested integrator.

    A run that does not converge still writes its report, with the partial
    result when one was formed.
    """
    fmt = fmt or scenario.output.format
    try:
        F, A = _build(scenario)
    except (SetIntError, ValueError) as e:
        logger.error("invalid scenario: %s", e)
        return ExitCode.INVALID_INPUT

    code = ExitCode.OK
    prefix = scenario.output.prefix
    for method in scenario.integrators:
        result: IntegralResult | None = None
        trace: list[dict[str, Any]] = []
        status, message = "ok", ""
        try:
            result = INTEGRATORS[method](F, A, scenario.tolerances, workers)
        except NoConvergenceError as e:
            status, message = "no_convergence", str(e)
            result = e.partial
            trace = trace_rows(str(method), e.trace)
            code = max(code, ExitCode.NO_CONVERGENCE)
        except (SetIntError, ValueError, NotImplementedError) as e:
            status, message = "invalid", str(e)
            code = max(code, ExitCode.INVALID_INPUT)
        if result is not None:
            trace = trace_rows(str(method), result.trace)
        body = {
            "method": str(method),
            "status": status,
            "message": message,
            "scenario": scenario.model_dump(mode="json"),
            "result": None if result is None else result.to_dict(),
        }
        if _writes_json(fmt):
            write_text(
                out / f"{prefix}_{method}.json",
                render_json(envelope("integral", scenario.scenario_hash, body)),
            )
        if _writes_csv(fmt):
            write_text(out / f"{prefix}_{method}_trace.csv", render_csv(TRACE_COLUMNS, trace))
        logger.info("%s on %s: %s", method, F.name, status)
    return code


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def run_compare(scenario: Scenario, out: Path, workers: int = 1) -> int:
    """Pairwise equivalence checks; exit 3 on any VIOLATION."""
    try:
        F, A = _build(scenario)
    except (SetIntError, ValueError) as e:
        logger.error("invalid scenario: %s", e)
        return ExitCode.INVALID_INPUT
    report = compare_all(F, A, scenario.tolerances, workers, tuple(scenario.integrators))
    write_text(
        out / f"{scenario.output.prefix}_compare.json",
        render_json(envelope("comparison", scenario.scenario_hash, report.to_dict())),
    )
    if report.violations:
        return ExitCode.VIOLATION
    if report.non_converged:
        return ExitCode.NO_CONVERGENCE
    return ExitCode.OK


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------


def direction_ladder(dim: int, m_max: int) -> list[int]:
    """Doubling direction counts up to ``m_max``: from 8 in the plane, 32 in space."""
    if dim == 1:
        return [2]
    m = 8 if dim == 2 else 32
    if m_max < m:
        return [m_max]
    ladder = []
    while m <= m_max:
        ladder.append(m)
        m *= 2
    return ladder


def _row(
    method: Method,
    refinement: float,
    h_prev: float | None,
    estimate: float,
    evals: int,
    value: ConvexBody,
    oracle: OracleResult | None,
) -> dict[str, Any]:
    return {
        "method": str(method),
        "refinement_param": refinement,
        "h_to_previous": h_prev,
        "error_estimate": estimate,
        "evals": evals,
        "h_to_oracle": None if oracle is None else dense_distance(value, oracle),
    }


def sweep_levels(
    method: Method,
    level: Callable[[int], LevelOutcome],
    F: Multifunction,
    A: IntervalSet,
    tol: Tolerances,
    oracle: OracleResult | None,
) -> list[dict[str, Any]]:
    """Every depth k = 0..max_depth, with no stopping rule."""
    rows = []
    previous: ConvexBody | None = None
    evaluations = 0
    realization = F.realization_error * A.measure
    for k in range(tol.max_depth + 1):
        outcome = level(k)
        evaluations += outcome.evaluations
        h_prev = None if previous is None else hausdorff_distance(previous, outcome.value)
        estimate = max(outcome.estimate, h_prev or 0.0) + realization
        rows.append(_row(method, k, h_prev, estimate, evaluations, outcome.value, oracle))
        previous = outcome.value
    return rows


def sweep_directions(
    method: Method,
    F: Multifunction,
    A: IntervalSet,
    tol: Tolerances,
    oracle: OracleResult | None,
    workers: int = 1,
) -> list[dict[str, Any]]:
    """Pettis or Aumann at doubling direction counts.

    Raises:
        NoConvergenceError: With the rows measured so far as its trace.
    """
    rows: list[dict[str, Any]] = []
    previous: ConvexBody | None = None
    for m in direction_ladder(F.dim, tol.directions):
        try:
            r = INTEGRATORS[method](F, A, tol.model_copy(update={"directions": m}), workers)
        except NoConvergenceError as e:
            raise NoConvergenceError(str(e), method=str(method), trace=rows) from e
        h_prev = None if previous is None else hausdorff_distance(previous, r.value)
        rows.append(_row(method, m, h_prev, r.error_estimate, r.evaluations, r.value, oracle))
        previous = r.value
    return rows


def run_convergence(
    scenario: Scenario, out: Path, workers: int = 1, fmt: ReportFormat | None = None
) -> int:
    """One CSV row per refinement level and integrator.

    McShane sweeps the gauge 2⁻ᵏ and Birkhoff the dyadic depth k; Pettis and
    Aumann double the direction count. ``h_to_oracle`` is measured over the
    full oracle grid and left empty when the entry has no oracle.
    """
    fmt = fmt or scenario.output.format
    try:
        F, A = _build(scenario)
    except (SetIntError, ValueError) as e:
        logger.error("invalid scenario: %s", e)
        return ExitCode.INVALID_INPUT
    tol = scenario.tolerances
    oracle = oracle_integral(F, A, workers=workers) if F.has_oracle else None
    grid = direction_grid(F.dim, tol.directions)

    code = ExitCode.OK
    rows: list[dict[str, Any]] = []
    for method in scenario.integrators:
        try:
            if method == Method.MCSHANE:
                jumps = jump_sizes(F)
                rows += sweep_levels(
                    method,
                    lambda k: mcshane_level(F, A, grid, k, tol, workers, jumps),
                    F,
                    A,
                    tol,
                    oracle,
                )
            elif method == Method.BIRKHOFF:
                jumps = jump_sizes(F)
                rows += sweep_levels(
                    method,
                    lambda k: birkhoff_level(F, A, grid, k, tol, workers, jumps),
                    F,
                    A,
                    tol,
                    oracle,
                )
            else:
                rows += sweep_directions(method, F, A, tol, oracle, workers)
        except NoConvergenceError as e:
            logger.warning("%s sweep stopped: %s", method, e)
            rows += list(e.trace)
            code = max(code, ExitCode.NO_CONVERGENCE)
        except UnsupportedDimensionError as e:
            logger.warning("%s skipped: %s", method, e)
        except (SetIntError, ValueError) as e:
            logger.error("%s sweep failed: %s", method, e)
            code = max(code, ExitCode.INVALID_INPUT)

    prefix = scenario.output.prefix
    write_text(out / f"{prefix}_convergence.csv", render_csv(CONVERGENCE_COLUMNS, rows))
    if fmt == ReportFormat.BOTH:
        write_text(
            out / f"{prefix}_convergence.json",
            render_json(envelope("convergence", scenario.scenario_hash, {"rows": rows})),
        )
    return code


# ---------------------------------------------------------------------------
# selftest
# ---------------------------------------------------------------------------

SELFTEST_ENTRIES = (
    "constant_K",
    "segment_growth",
    "scaled_disk",
    "rotating_segment",
    "polytope_interp",
    "piecewise_jump",
)


def selftest_tolerances() -> Tolerances:
    return Tolerances(epsilon_target=1e-2, max_depth=12, tag_samples=8, directions=64, seed=0)


def run_selftest(out: Path, workers: int = 1) -> int:
    """Compare all four integrators and the oracle on the built-in entries.

    Exits 3 when a pair is flagged or a rigorous result lies farther from the
    oracle than its own estimate. Sampled estimates that miss are reported
    and logged only.
    """
    tol = selftest_tolerances()
    A = IntervalSet.unit()
    suite = {"entries": list(SELFTEST_ENTRIES), "tolerances": tol.model_dump(mode="json")}
    suite_hash = hashlib.sha256(json.dumps(suite, sort_keys=True).encode()).hexdigest()

    code = ExitCode.OK
    cases = []
    for name in SELFTEST_ENTRIES:
        F = catalog(name)
        report = compare_all(F, A, tol, workers)
        o = oracle_integral(F, A, workers=workers)
        checks = {}
        for method, result in report.results.items():
            distance = oracle_distance(result, o)
            within = distance <= result.error_estimate + 1e-12
            checks[str(method)] = {
                "oracle_distance": distance,
                "error_estimate": result.error_estimate,
                "within_estimate": within,
                "rigorous": result.rigorous,
            }
            if within:
                continue
            log = logger.error if result.rigorous else logger.warning
            log(
                "%s %s: oracle distance %.3e > estimate %.3e",
                name,
                method,
                distance,
                result.error_estimate,
            )
            if result.rigorous:
                code = ExitCode.VIOLATION
        if report.violations:
            code = ExitCode.VIOLATION
        elif report.non_converged and code == ExitCode.OK:
            code = ExitCode.NO_CONVERGENCE
        cases.append({"entry": name, "comparison": report.to_dict(), "oracle": checks})

    body = {"cases": cases, "passed": code == ExitCode.OK, "suite": suite}
    write_text(out / "selftest.json", render_json(envelope("selftest", suite_hash, body)))
    logger.info("selftest over %d entries: exit %d", len(cases), int(code))
    return code


# ---------------------------------------------------------------------------
# regen-fixtures
# ---------------------------------------------------------------------------


def run_regen_fixtures(directory: Path | None = None, check: bool = False, workers: int = 1) -> int:
    """Write the oracle fixtures, or with ``check`` verify them (exit 1 on drift)."""
    if check:
        problems = check_fixtures(directory, workers=workers)
        for problem in problems:
            logger.error("%s", problem)
        if problems:
            logger.error("oracle fixtures are stale; regenerate with `setint regen-fixtures`")
            return ExitCode.INVALID_INPUT
        logger.info("oracle fixtures are up to date")
        return ExitCode.OK
    written = write_fixtures(directory, workers=workers)
    logger.info("wrote %d oracle fixtures", len(written))
    return ExitCode.OK
