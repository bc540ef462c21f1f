"""Cross-checking the four integrators against each other."""

import itertools

import numpy as np
import pytest

from domain import IntervalSet
from geometry import canonicalize, hausdorff_distance, minkowski_combination
from geometry.embedding import direction_grid
from integrators import ComparisonReport, IntegralResult, check_pairs, compare_all
from integrators.compare import VIOLATION_FACTOR, FanRung, fan_ladder_sizes
from multifunctions import catalog
from shared.enums import Method
from tests.fixtures.runs import tolerances

UNIT = IntervalSet.unit()
QUICK = {"epsilon_target": 1e-2, "directions": 64, "tag_samples": 8}


def _fake(method, vertices, estimate):
    body = canonicalize(vertices)
    return IntegralResult(body, method, estimate, (), 0, direction_grid(body.dim, 8))


@pytest.mark.parametrize("name", ["segment_growth", "constant_K", "polytope_interp"])
def test_catalog_entries_agree(name):
    report = compare_all(catalog(name), UNIT, tolerances(**QUICK))
    assert set(report.results) == set(Method)
    assert report.violations == ()
    assert report.failures == {}


def test_segment_growth_agrees_with_the_exact_value():
    report = compare_all(catalog("segment_growth"), UNIT, tolerances())
    for result in report.results.values():
        np.testing.assert_allclose(result.value.vertices, [[0.0], [0.5]], atol=1e-3)
    assert report.fan_ladder == ()


def test_piecewise_jump_results_are_within_their_estimates():
    F = catalog("piecewise_jump")
    exact = minkowski_combination([F(0.0), F(1.0)], [0.5, 0.5])
    report = compare_all(F, UNIT, tolerances(**QUICK))
    for result in report.results.values():
        if result.rigorous:
            assert hausdorff_distance(result.value, exact) <= result.error_estimate + 1e-9


def test_fan_ladder_approaches_the_pettis_value():
    report = compare_all(catalog("scaled_disk"), UNIT, tolerances(**QUICK))
    assert [r.directions for r in report.fan_ladder] == [16, 32, 64]
    assert report.fan_monotone
    assert report.violations == ()


def test_fan_distance_falls_as_the_fan_doubles_to_512():
    report = compare_all(
        catalog("scaled_disk"),
        UNIT,
        tolerances(directions=512),
        methods=(Method.PETTIS, Method.AUMANN),
    )
    ladder = report.fan_ladder
    assert [r.directions for r in ladder] == [16, 32, 64, 128, 256, 512]
    assert report.fan_monotone
    distances = [r.distance_to_pettis for r in ladder]
    assert all(b < a for a, b in itertools.pairwise(distances))
    assert distances[-1] <= 1e-9
    assert report.violations == ()


@pytest.mark.parametrize(
    ("m", "expected"),
    [
        (512, [16, 32, 64, 128, 256, 512]),
        (64, [16, 32, 64]),
        (48, [24, 48]),
        (8, [4, 8]),
        (5, [5]),
    ],
)
def test_fan_ladder_sizes(m, expected):
    assert fan_ladder_sizes(m) == expected


def test_matrix_is_symmetric_with_a_zero_diagonal():
    report = compare_all(catalog("polytope_interp"), UNIT, tolerances(**QUICK))
    matrix = np.array(report.matrix(), dtype=float)
    np.testing.assert_array_equal(np.diag(matrix), 0.0)
    np.testing.assert_array_equal(matrix, matrix.T)
    assert len(report.pairs) == 6


def test_report_serializes():
    report = compare_all(catalog("segment_growth"), UNIT, tolerances(**QUICK))
    out = report.to_dict()
    assert out["methods"] == ["mcshane", "birkhoff", "pettis", "aumann"]
    assert out["violations"] == 0
    assert set(out["results"]) == {"mcshane", "birkhoff", "pettis", "aumann"}


def test_runs_do_not_depend_on_the_worker_count():
    F, tol = catalog("scaled_disk", {"polygon_m": 64}), tolerances(**QUICK)
    serial = compare_all(F, UNIT, tol, workers=1)
    assert serial.to_dict() == compare_all(F, UNIT, tol, workers=4).to_dict()


def test_non_converged_runs_contribute_their_partial_result():
    tol = tolerances(epsilon_target=1e-6, max_depth=2)
    report = compare_all(
        catalog("segment_growth"), UNIT, tol, methods=(Method.MCSHANE, Method.PETTIS)
    )
    assert report.non_converged == (Method.MCSHANE,)
    assert Method.MCSHANE in report.failures
    assert set(report.results) == {Method.MCSHANE, Method.PETTIS}


def test_unsupported_method_is_recorded_and_skipped():
    cube = [[x, y, z] for x in (-1.0, 1.0) for y in (-1.0, 1.0) for z in (-1.0, 1.0)]
    report = compare_all(
        catalog("constant_K", {"K": cube}),
        UNIT,
        tolerances(directions=50),
        methods=(Method.PETTIS, Method.AUMANN),
    )
    assert set(report.results) == {Method.PETTIS}
    assert "dim" in report.failures[Method.AUMANN]
    assert report.non_converged == ()


# ---------------------------------------------------------------------------
# check_pairs
# ---------------------------------------------------------------------------


class TestCheckPairs:
    def test_distant_values_are_a_violation(self):
        results = {
            Method.MCSHANE: _fake(Method.MCSHANE, [[0.0], [1.0]], 1e-3),
            Method.BIRKHOFF: _fake(Method.BIRKHOFF, [[0.0], [1.5]], 1e-3),
        }
        (pair,) = check_pairs(results)
        assert pair.distance == pytest.approx(0.5)
        assert pair.combined_estimate == pytest.approx(2e-3)
        assert pair.violation
        report = ComparisonReport(results, (pair,))
        assert report.violations == (pair,)
        assert report.to_dict()["violations"] == 1

    def test_violation_threshold(self):
        results = {
            Method.PETTIS: _fake(Method.PETTIS, [[0.0], [1.0]], 0.1),
            Method.BIRKHOFF: _fake(Method.BIRKHOFF, [[0.0], [1.0 + 0.2 * VIOLATION_FACTOR]], 0.1),
        }
        (pair,) = check_pairs(results)
        assert pair.first == Method.BIRKHOFF
        assert not pair.violation

    def test_aumann_pairs_are_one_sided(self):
        results = {
            Method.PETTIS: _fake(Method.PETTIS, [[0.0], [1.0]], 1e-3),
            Method.AUMANN: _fake(Method.AUMANN, [[0.25], [0.75]], 1e-3),
        }
        (pair,) = check_pairs(results)
        assert pair.one_sided
        assert pair.distance == pytest.approx(0.25)
        assert pair.checked_distance == 0.0
        assert not pair.violation

    def test_aumann_outside_the_outer_value_is_flagged(self):
        results = {
            Method.PETTIS: _fake(Method.PETTIS, [[0.0], [1.0]], 1e-3),
            Method.AUMANN: _fake(Method.AUMANN, [[0.0], [1.5]], 1e-3),
        }
        (pair,) = check_pairs(results)
        assert pair.checked_distance == pytest.approx(0.5)
        assert pair.violation

    def test_missing_results_leave_holes_in_the_matrix(self):
        results = {Method.PETTIS: _fake(Method.PETTIS, [[0.0], [1.0]], 1e-3)}
        matrix = ComparisonReport(results, check_pairs(results)).matrix()
        assert matrix[2][2] == 0.0
        assert matrix[0][0] is None
        assert matrix[0][2] is None


def test_fan_monotonicity_tolerates_small_growth():
    ok = ComparisonReport({}, (), fan_ladder=(FanRung(32, 1.0), FanRung(64, 1.05)))
    bad = ComparisonReport({}, (), fan_ladder=(FanRung(32, 1.0), FanRung(64, 1.2)))
    assert ok.fan_monotone
    assert not bad.fan_monotone
