"""McShane and Birkhoff integration on gauge-fine and dyadic partitions."""

import dataclasses
import logging

import numpy as np
import pytest

from domain import IntervalSet
from geometry import bodies_close, canonicalize, hausdorff_distance, minkowski_combination
from geometry.embedding import direction_grid
from integrators import birkhoff_integrate, birkhoff_level, mcshane_integrate, mcshane_level
from integrators.birkhoff import first_depth
from multifunctions import catalog
from shared.enums import Method
from shared.errors import NoConvergenceError, UnboundedMultifunctionError
from tests.fixtures.bodies import SQUARE, TRIANGLE, random_polygon
from tests.fixtures.runs import tolerances

UNIT = IntervalSet.unit()
INTEGRATORS = [mcshane_integrate, birkhoff_integrate]


def _assert_trace_is_reproducible(result):
    assert result.trace[0].h_to_previous is None
    assert len(result.intermediates) == len(result.trace)
    for i in range(1, len(result.trace)):
        h = hausdorff_distance(result.intermediates[i - 1], result.intermediates[i])
        assert result.trace[i].h_to_previous == pytest.approx(h, abs=1e-15)
    assert result.value is result.intermediates[-1]
    evals = [tp.evaluations for tp in result.trace]
    assert evals == sorted(evals)
    assert evals[-1] == result.budget_used


# ---------------------------------------------------------------------------
# Shared behaviour
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_constant_converges_at_the_first_level(integrate):
    result = integrate(catalog("constant_K"), UNIT, tolerances())
    assert len(result.trace) == 1
    assert bodies_close(result.value, canonicalize(SQUARE), 1e-12)


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_segment_growth(integrate):
    result = integrate(catalog("segment_growth"), UNIT, tolerances())
    np.testing.assert_allclose(result.value.vertices, [[0.0], [0.5]], atol=1e-12)
    assert result.error_estimate <= 1e-3
    _assert_trace_is_reproducible(result)


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_restricted_domain(integrate):
    A = IntervalSet.of((0.0, 0.25), (0.5, 1.0))
    result = integrate(catalog("segment_growth"), A, tolerances())
    assert result.value.vertices[-1, 0] == pytest.approx(0.40625, abs=1e-3)


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_empty_domain_is_the_origin(integrate):
    result = integrate(catalog("scaled_disk"), IntervalSet.empty(), tolerances())
    assert result.value.is_point
    np.testing.assert_array_equal(result.value.vertices, [[0.0, 0.0]])
    assert result.error_estimate == 0.0
    assert result.budget_used == 0


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_unbounded_multifunction_is_refused(integrate):
    F = dataclasses.replace(catalog("segment_growth"), bound=None)
    with pytest.raises(UnboundedMultifunctionError):
        integrate(F, UNIT, tolerances())


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_depth_budget_exhausted(integrate):
    with pytest.raises(NoConvergenceError) as info:
        integrate(catalog("segment_growth"), UNIT, tolerances(epsilon_target=1e-6, max_depth=2))
    err = info.value
    assert err.partial is not None
    assert len(err.trace) == 3
    assert [tp.refinement for tp in err.trace] == [0, 1, 2]


@pytest.mark.parametrize("integrate", INTEGRATORS)
def test_runs_do_not_depend_on_the_worker_count(integrate):
    F = catalog("scaled_disk", {"polygon_m": 64})
    tol = tolerances(epsilon_target=1e-2, directions=64)
    serial = integrate(F, UNIT, tol, workers=1)
    threaded = integrate(F, UNIT, tol, workers=4)
    assert serial.to_dict() == threaded.to_dict()


# ---------------------------------------------------------------------------
# McShane
# ---------------------------------------------------------------------------


class TestMcShane:
    def test_results_are_flagged_as_sampled(self):
        result = mcshane_integrate(catalog("segment_growth"), UNIT, tolerances())
        assert result.method == Method.MCSHANE
        assert not result.rigorous
        assert all(tp.note == "sampled" for tp in result.trace)

    def test_piecewise_jump(self):
        F = catalog("piecewise_jump")
        result = mcshane_integrate(F, UNIT, tolerances())
        exact = minkowski_combination([F(0.0), F(1.0)], [0.5, 0.5])
        assert hausdorff_distance(result.value, exact) <= result.error_estimate + 1e-12
        assert result.details["jump_term"] >= 0.0

    def test_scaled_disk_value(self):
        F = catalog("scaled_disk", {"polygon_m": 64})
        result = mcshane_integrate(F, UNIT, tolerances(directions=64))
        half = minkowski_combination([F(1.0)], [0.5])
        assert hausdorff_distance(result.value, half) <= 1e-3

    def test_level_terms(self):
        F = catalog("constant_K")
        grid = direction_grid(2, 256)
        out = mcshane_level(F, UNIT, grid, 0, tolerances())
        assert out.details["sampled_diameter"] <= 1e-12
        expected = 2.0 * grid.deficit_factor * F.bound
        assert out.details["covering_term"] == pytest.approx(expected)
        assert out.estimate == pytest.approx(expected, abs=1e-12)

    def test_leak_term_is_budgeted(self):
        tol = tolerances(leak=0.5)
        with pytest.raises(ValueError, match="leak"):
            mcshane_integrate(catalog("segment_growth"), UNIT, tol)

    def test_small_leak_is_accounted_for(self):
        tol = tolerances(epsilon_target=1e-2, leak=1e-4)
        result = mcshane_integrate(catalog("segment_growth"), UNIT, tol)
        assert result.details["leak"] <= 1e-4
        assert result.value.vertices[-1, 0] == pytest.approx(0.5, abs=1e-2)


# ---------------------------------------------------------------------------
# Birkhoff
# ---------------------------------------------------------------------------


class TestBirkhoff:
    def test_segment_growth_stops_once_the_oscillation_is_small(self):
        result = birkhoff_integrate(catalog("segment_growth"), UNIT, tolerances())
        assert result.trace[-1].refinement == 10
        assert result.details["oscillation"] == pytest.approx(2.0**-10)
        assert result.rigorous

    def test_dyadic_jump_converges_at_depth_one(self):
        F = catalog("piecewise_jump")
        result = birkhoff_integrate(F, UNIT, tolerances())
        assert [tp.refinement for tp in result.trace] == [1]
        assert result.trace[0].h_to_previous is None
        assert result.error_estimate <= 1e-12
        exact = minkowski_combination([F(0.0), F(1.0)], [0.5, 0.5])
        assert hausdorff_distance(result.value, exact) <= 1e-12

    def test_chain_starts_where_the_jumps_are_cell_boundaries(self):
        F = catalog("piecewise_jump", {"jump": 0.375})
        result = birkhoff_integrate(F, UNIT, tolerances())
        assert result.trace[0].refinement == 3
        exact = minkowski_combination([F(0.0), F(1.0)], [0.375, 0.625])
        assert hausdorff_distance(result.value, exact) <= result.error_estimate + 1e-12

    @pytest.mark.parametrize(
        ("jumps", "expected"),
        [((), 0), ((0.5,), 1), ((0.25, 0.5), 2), ((0.375,), 3), ((1.0 / 3.0,), 0)],
    )
    def test_first_depth(self, jumps, expected):
        assert first_depth(jumps, 14) == expected

    def test_oscillation_halves_across_an_interior_jump(self):
        F = catalog("piecewise_jump", {"jump": 1.0 / 3.0})
        A_, B_ = F(0.0), F(1.0)
        size = hausdorff_distance(A_, B_)
        exact = minkowski_combination([A_, B_], [1.0 / 3.0, 2.0 / 3.0])
        grid = direction_grid(2, 64)
        tol = tolerances(directions=64, tag_samples=4)
        for k in range(2, 11):
            out = birkhoff_level(F, UNIT, grid, k, tol)
            assert out.details["oscillation"] == pytest.approx(size * 2.0**-k, rel=1e-12)
            assert hausdorff_distance(out.value, exact) <= out.details["oscillation"] + 1e-12

    def test_interior_jump_result_is_within_its_estimate(self):
        F = catalog("piecewise_jump", {"jump": 1.0 / 3.0})
        result = birkhoff_integrate(F, UNIT, tolerances())
        exact = minkowski_combination([F(0.0), F(1.0)], [1.0 / 3.0, 2.0 / 3.0])
        assert hausdorff_distance(result.value, exact) <= result.error_estimate

    def test_value_does_not_depend_on_the_direction_grid(self):
        F = catalog("polytope_interp")
        coarse = birkhoff_integrate(F, UNIT, tolerances(epsilon_target=1e-2, directions=16))
        fine = birkhoff_integrate(F, UNIT, tolerances(epsilon_target=1e-2, directions=128))
        assert coarse.trace[-1].refinement == fine.trace[-1].refinement
        np.testing.assert_array_equal(coarse.value.vertices, fine.value.vertices)

    def test_every_tag_assignment_lies_within_the_oscillation(self):
        rng = np.random.default_rng(7)
        F = catalog(
            "polytope_interp",
            {
                "A": random_polygon(rng).vertices.tolist(),
                "B": random_polygon(rng).vertices.tolist(),
            },
        )
        k = 10
        grid = direction_grid(2, 64)
        out = birkhoff_level(F, UNIT, grid, k, tolerances(directions=64, tag_samples=2))
        assert out.details["oscillation"] <= 2.0 * F.lipschitz * 2.0**-k
        n = 2**k
        lo = np.arange(n) / n
        hi = (np.arange(n) + 1.0) / n
        weights = np.full(n, 1.0 / n)
        for tags in (lo, (lo + hi) / 2.0, np.nextafter(hi, lo)):
            total = minkowski_combination([F(t) for t in tags], weights)
            assert hausdorff_distance(total, out.value) <= out.details["oscillation"] + 1e-12

    def test_missing_lipschitz_constant_falls_back_to_sampling(self, caplog):
        F = dataclasses.replace(catalog("segment_growth"), lipschitz=None)
        with caplog.at_level(logging.WARNING):
            result = birkhoff_integrate(F, UNIT, tolerances())
        assert not result.rigorous
        assert result.trace[-1].note == "sampled"
        assert "oscillation is sampled" in caplog.text
        assert result.value.vertices[-1, 0] == pytest.approx(0.5, abs=1e-3)

    def test_additive_over_disjoint_domains(self):
        F = catalog("polytope_interp", {"A": TRIANGLE})
        tol = tolerances(epsilon_target=1e-2)
        left = birkhoff_integrate(F, IntervalSet.of((0.0, 0.5)), tol)
        right = birkhoff_integrate(F, IntervalSet.of((0.5, 1.0)), tol)
        whole = birkhoff_integrate(F, UNIT, tol)
        joined = minkowski_combination([left.value, right.value], [1.0, 1.0])
        bound = left.error_estimate + right.error_estimate + whole.error_estimate
        assert hausdorff_distance(joined, whole.value) <= bound
