"""Tests for McShane and Birkhoff partition generation (domain.partitions)."""

import numpy as np
import pytest

from domain import (
    CallableGauge,
    Cell,
    ConstantGauge,
    DistanceGauge,
    IntervalSet,
    PiecewiseConstantGauge,
    TaggedPartition,
    generate_birkhoff_partition,
    generate_mcshane_partition,
    is_fine,
    refinement_gauge,
    sample_tags,
)
from shared.enums import PartitionKind, Tagging
from shared.errors import DepthLimitError, UnboundedGaugeRefusedError

GAUGES = [
    ConstantGauge(0.3),
    ConstantGauge(0.01),
    PiecewiseConstantGauge((0.0, 0.5, 1.0), (0.1, 0.02)),
    DistanceGauge((0.5,), c=0.1, r_floor=1e-4),
    refinement_gauge(5, [1.0 / 3.0]),
]


def _single(lo, hi, tag, kind=PartitionKind.MCSHANE, leak=None):
    cell = Cell(IntervalSet.of((lo, hi)), tag)
    if leak is None:
        leak = 1.0 - (hi - lo)
    return TaggedPartition((cell,), kind, leak)


# ---------------------------------------------------------------------------
# is_fine
# ---------------------------------------------------------------------------


def test_cell_inside_the_gauge_ball_is_fine():
    assert is_fine(_single(0.4, 0.6, 0.5), ConstantGauge(0.2))


def test_cell_wider_than_the_gauge_ball_is_not_fine():
    assert not is_fine(_single(0.4, 0.6, 0.5), ConstantGauge(0.05))


def test_tag_may_sit_outside_a_mcshane_cell():
    assert is_fine(_single(0.4, 0.6, 0.35), ConstantGauge(0.3))


# ---------------------------------------------------------------------------
# generate_mcshane_partition
# ---------------------------------------------------------------------------


class TestMcShanePartition:
    @pytest.mark.parametrize("gauge", GAUGES, ids=lambda g: type(g).__name__)
    @pytest.mark.parametrize("tagging", list(Tagging))
    def test_generated_partitions_are_fine(self, gauge, tagging):
        for seed in range(100):
            p = generate_mcshane_partition(gauge, seed=seed, tagging=tagging)
            assert is_fine(p, gauge)
            assert abs(p.covered + p.leak - 1.0) <= 1e-12

    def test_constant_gauge_cell_count(self):
        for seed in range(1000):
            p = generate_mcshane_partition(ConstantGauge(0.3), seed=seed)
            assert len(p.cells) <= 8
            assert is_fine(p, ConstantGauge(0.3))

    def test_random_tags_leave_their_cells_sometimes(self):
        outside = 0
        for seed in range(50):
            p = generate_mcshane_partition(ConstantGauge(0.01), seed=seed)
            outside += sum(not cell.set.contains(cell.tag) for cell in p.cells)
        assert outside > 0

    def test_same_seed_same_partition(self):
        a = generate_mcshane_partition(ConstantGauge(0.5), seed=17)
        b = generate_mcshane_partition(ConstantGauge(0.5), seed=17)
        assert a.to_dict() == b.to_dict()
        assert a.to_dict() != generate_mcshane_partition(ConstantGauge(0.5), seed=18).to_dict()

    def test_cells_shrink_near_the_singular_point(self):
        g = DistanceGauge((0.5,), c=0.1, r_floor=1e-4)
        p = generate_mcshane_partition(g, seed=3)
        lo, hi, _ = p.arrays()
        inside = (lo > 0.45) & (hi < 0.55)
        assert inside.any()
        assert np.max(hi[inside] - lo[inside]) <= 0.02

    def test_leak_budget(self):
        p = generate_mcshane_partition(ConstantGauge(0.01), leak=0.1, seed=0)
        assert 0.0 < p.leak <= 0.1
        assert abs(p.covered + p.leak - 1.0) <= 1e-12

    def test_midpoint_tags_are_centred(self):
        p = generate_mcshane_partition(ConstantGauge(0.1), tagging=Tagging.MIDPOINT)
        lo, hi, tags = p.arrays()
        np.testing.assert_allclose(tags, (lo + hi) / 2.0)

    def test_gauge_without_lower_bound_is_refused(self):
        with pytest.raises(UnboundedGaugeRefusedError):
            generate_mcshane_partition(CallableGauge(lambda t: 0.1))

    def test_leak_must_be_below_one(self):
        with pytest.raises(ValueError, match="leak"):
            generate_mcshane_partition(ConstantGauge(0.1), leak=1.0)

    def test_dict_round_trip(self):
        p = generate_mcshane_partition(ConstantGauge(0.2), leak=0.05, seed=4)
        assert TaggedPartition.from_dict(p.to_dict()) == p


# ---------------------------------------------------------------------------
# TaggedPartition validation
# ---------------------------------------------------------------------------


def test_overlapping_cells_are_rejected():
    cells = (Cell(IntervalSet.of((0.0, 0.6)), 0.1), Cell(IntervalSet.of((0.5, 1.0)), 0.7))
    with pytest.raises(ValueError, match="overlap"):
        TaggedPartition(cells, PartitionKind.MCSHANE)


def test_birkhoff_tags_must_lie_in_their_cells():
    cells = (Cell(IntervalSet.of((0.0, 0.5)), 0.7), Cell(IntervalSet.of((0.5, 1.0)), 0.6))
    with pytest.raises(ValueError, match="outside"):
        TaggedPartition(cells, PartitionKind.BIRKHOFF)


def test_birkhoff_partition_must_cover():
    with pytest.raises(ValueError, match="cover"):
        _single(0.0, 0.5, 0.25, kind=PartitionKind.BIRKHOFF, leak=0.0)


def test_mcshane_leak_must_account_for_the_gap():
    with pytest.raises(ValueError, match="leak"):
        _single(0.0, 0.5, 0.25, leak=0.0)


# ---------------------------------------------------------------------------
# generate_birkhoff_partition
# ---------------------------------------------------------------------------


class TestBirkhoffPartition:
    def test_depth_zero_is_the_unit_interval(self):
        assert generate_birkhoff_partition(0) == [IntervalSet.unit()]

    def test_depth_two(self):
        cells = generate_birkhoff_partition(2)
        assert [c.measure for c in cells] == [0.25] * 4
        assert cells[1].intervals == ((0.25, 0.5),)

    def test_each_level_refines_the_previous(self):
        coarse = generate_birkhoff_partition(2)
        for cell in generate_birkhoff_partition(3):
            assert sum(cell.is_subset_of(parent) for parent in coarse) == 1

    @pytest.mark.parametrize("k", [1, 5, 10])
    def test_cells_are_exact_dyadic(self, k):
        cells = generate_birkhoff_partition(k)
        assert len(cells) == 2**k
        assert all(c.measure == 2.0**-k for c in cells)
        assert sum(c.measure for c in cells) == 1.0

    def test_depth_limit(self):
        with pytest.raises(DepthLimitError):
            generate_birkhoff_partition(31)

    def test_negative_depth(self):
        with pytest.raises(ValueError):
            generate_birkhoff_partition(-1)


# ---------------------------------------------------------------------------
# sample_tags
# ---------------------------------------------------------------------------


class TestSampleTags:
    def test_first_two_assignments_are_deterministic(self):
        tags = sample_tags(generate_birkhoff_partition(1), count=4, seed=0)
        np.testing.assert_array_equal(tags[0], [0.0, 0.5])
        np.testing.assert_array_equal(tags[1], [0.25, 0.75])
        assert len(tags) == 4

    def test_count_one_keeps_left_endpoints(self):
        tags = sample_tags(generate_birkhoff_partition(2), count=1, seed=0)
        assert len(tags) == 1
        np.testing.assert_array_equal(tags[0], [0.0, 0.25, 0.5, 0.75])

    def test_sampled_tags_lie_in_their_cells(self):
        cells = generate_birkhoff_partition(4)
        for assignment in sample_tags(cells, count=1000, seed=11):
            assert all(c.contains(t) for c, t in zip(cells, assignment))

    def test_multi_interval_cells(self):
        cells = [IntervalSet.of((0.0, 0.1), (0.5, 0.6)), IntervalSet.of((0.2, 0.4))]
        for assignment in sample_tags(cells, count=200, seed=2):
            assert all(c.contains(t) for c, t in zip(cells, assignment))

    def test_seeded(self):
        cells = generate_birkhoff_partition(3)
        a = sample_tags(cells, count=5, seed=9)
        b = sample_tags(cells, count=5, seed=9)
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x, y)

    def test_count_must_be_positive(self):
        with pytest.raises(ValueError):
            sample_tags(generate_birkhoff_partition(1), count=0, seed=0)
