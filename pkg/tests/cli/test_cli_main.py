"""End-to-end runs of the setint command line (cli.main, cli.commands)."""

import json

import numpy as np
import pytest

from cli.commands import direction_ladder
from cli.main import main
from cli.reports import CONVERGENCE_COLUMNS, TRACE_COLUMNS
from integrators import ComparisonReport, PairCheck
from shared.config import settings
from shared.enums import Method


@pytest.fixture
def scenario(tmp_path):
    """Write a scenario file; keyword arguments replace top-level fields."""

    def write(**changes):
        data = {
            "multifunction": {"name": "segment_growth"},
            "integrators": ["pettis"],
            "tolerances": {"seed": 0, "epsilon_target": 1e-2, "directions": 64, "tag_samples": 8},
        }
        data.update(changes)
        path = tmp_path / "scenario.json"
        path.write_text(json.dumps(data))
        return path

    return write


def _run(*argv):
    return main([str(a) for a in argv])


# ---------------------------------------------------------------------------
# integrate
# ---------------------------------------------------------------------------


def test_integrate_writes_one_report_per_method(scenario, tmp_path):
    out = tmp_path / "reports"
    assert _run("integrate", "--scenario", scenario(), "--out", out) == 0
    report = json.loads((out / "run_pettis.json").read_text())
    assert report["kind"] == "integral"
    assert report["status"] == "ok"
    np.testing.assert_allclose(report["result"]["value"]["vertices"], [[0.0], [0.5]], atol=1e-9)
    assert len(report["scenario_hash"]) == 64


def test_csv_format_writes_the_trace(scenario, tmp_path):
    out = tmp_path / "reports"
    path = scenario(integrators=["birkhoff"])
    assert _run("integrate", "--scenario", path, "--out", out, "--format", "csv") == 0
    lines = (out / "run_birkhoff_trace.csv").read_text().splitlines()
    assert lines[0] == ",".join(TRACE_COLUMNS)
    assert lines[0].startswith("method,refinement_param,")
    assert len(lines) > 1
    assert all(line.split(",")[0] == "birkhoff" for line in lines[1:])
    assert not (out / "run_birkhoff.json").exists()


def test_unknown_entry_is_invalid_input(scenario, tmp_path, capsys):
    path = scenario(multifunction={"name": "nope"})
    assert _run("integrate", "--scenario", path, "--out", tmp_path) == 1
    assert "invalid scenario" in capsys.readouterr().err


def test_malformed_json_is_invalid_input(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text("{\n  oops")
    assert _run("integrate", "--scenario", path, "--out", tmp_path) == 1
    assert "broken.json:2:" in capsys.readouterr().err


def test_invalid_entry_params_are_invalid_input(scenario, tmp_path):
    path = scenario(multifunction={"name": "scaled_disk", "polygon_m": 2})
    assert _run("integrate", "--scenario", path, "--out", tmp_path) == 1


def test_threads_must_be_positive(scenario, tmp_path, capsys):
    assert _run("integrate", "--scenario", scenario(), "--out", tmp_path, "--threads", 0) == 1
    assert "--threads" in capsys.readouterr().err


def test_reports_do_not_depend_on_the_thread_count(scenario, tmp_path):
    path = scenario(
        multifunction={"name": "scaled_disk", "polygon_m": 64},
        integrators=["mcshane", "birkhoff", "pettis", "aumann"],
    )
    for threads in (1, 4):
        code = _run(
            "integrate", "--scenario", path, "--out", tmp_path / f"t{threads}", "--threads", threads
        )
        assert code == 0
    for method in Method:
        name = f"run_{method}.json"
        assert (tmp_path / "t1" / name).read_bytes() == (tmp_path / "t4" / name).read_bytes()


def test_no_convergence_still_writes_the_report(scenario, tmp_path):
    path = scenario(
        integrators=["mcshane"],
        tolerances={"seed": 0, "epsilon_target": 1e-6, "max_depth": 1, "tag_samples": 4},
    )
    assert _run("integrate", "--scenario", path, "--out", tmp_path) == 2
    report = json.loads((tmp_path / "run_mcshane.json").read_text())
    assert report["status"] == "no_convergence"
    assert report["result"] is not None
    assert len(report["result"]["trace"]) == 2


# ---------------------------------------------------------------------------
# compare
# ---------------------------------------------------------------------------


def test_compare_agreeing_methods(scenario, tmp_path):
    path = scenario(integrators=[str(m) for m in Method])
    assert _run("compare", "--scenario", path, "--out", tmp_path) == 0
    report = json.loads((tmp_path / "run_compare.json").read_text())
    assert report["kind"] == "comparison"
    assert report["violations"] == 0
    assert len(report["pairs"]) == 6


def test_compare_violation_exits_3(scenario, tmp_path, monkeypatch):
    flagged = PairCheck(Method.MCSHANE, Method.BIRKHOFF, 1.0, 1.0, 0.1, False)
    monkeypatch.setattr(
        "cli.commands.compare_all", lambda *args, **kwargs: ComparisonReport({}, (flagged,))
    )
    assert _run("compare", "--scenario", scenario(), "--out", tmp_path) == 3
    report = json.loads((tmp_path / "run_compare.json").read_text())
    assert report["violations"] == 1


# ---------------------------------------------------------------------------
# convergence
# ---------------------------------------------------------------------------


def test_convergence_rows(scenario, tmp_path):
    path = scenario(
        integrators=["birkhoff", "pettis"],
        tolerances={"seed": 0, "max_depth": 4, "directions": 64, "tag_samples": 4},
    )
    assert _run("convergence", "--scenario", path, "--out", tmp_path, "--format", "both") == 0
    lines = (tmp_path / "run_convergence.csv").read_text().splitlines()
    assert lines[0] == ",".join(CONVERGENCE_COLUMNS)
    methods = [line.split(",")[0] for line in lines[1:]]
    assert methods == ["birkhoff"] * 5 + ["pettis"]
    rows = json.loads((tmp_path / "run_convergence.json").read_text())["rows"]
    assert len(rows) == 6
    assert all(row["h_to_oracle"] is not None for row in rows)


def test_convergence_json_only_with_both(scenario, tmp_path):
    path = scenario(tolerances={"seed": 0, "max_depth": 2, "directions": 64})
    assert _run("convergence", "--scenario", path, "--out", tmp_path) == 0
    assert (tmp_path / "run_convergence.csv").exists()
    assert not (tmp_path / "run_convergence.json").exists()


@pytest.mark.parametrize(
    ("dim", "m_max", "expected"),
    [
        (1, 256, [2]),
        (2, 64, [8, 16, 32, 64]),
        (2, 4, [4]),
        (3, 128, [32, 64, 128]),
        (3, 20, [20]),
    ],
)
def test_direction_ladder(dim, m_max, expected):
    assert direction_ladder(dim, m_max) == expected


# ---------------------------------------------------------------------------
# selftest and regen-fixtures
# ---------------------------------------------------------------------------


def test_selftest_passes(tmp_path, monkeypatch):
    monkeypatch.setattr("cli.commands.SELFTEST_ENTRIES", ("segment_growth", "constant_K"))
    assert _run("selftest", "--out", tmp_path) == 0
    report = json.loads((tmp_path / "selftest.json").read_text())
    assert report["passed"] is True
    assert [case["entry"] for case in report["cases"]] == ["segment_growth", "constant_K"]


@pytest.mark.slow
def test_selftest_reports_do_not_depend_on_the_thread_count(tmp_path):
    codes, reports = set(), []
    for threads in (1, 4, 8):
        out = tmp_path / f"t{threads}"
        codes.add(_run("selftest", "--out", out, "--threads", threads))
        reports.append((out / "selftest.json").read_bytes())
    assert len(codes) == 1
    assert reports[0] == reports[1] == reports[2]


def test_fixture_check_on_an_empty_directory_fails(tmp_path):
    assert _run("regen-fixtures", "--check", "--out", tmp_path) == 1


def test_regenerated_fixtures_pass_the_check(tmp_path, monkeypatch):
    monkeypatch.setattr(settings.oracle, "directions", 64)
    assert _run("regen-fixtures", "--out", tmp_path) == 0
    assert list(tmp_path.glob("*.json"))
    assert _run("regen-fixtures", "--check", "--out", tmp_path) == 0
