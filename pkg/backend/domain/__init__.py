from domain.gauges import (
    CallableGauge,
    ConstantGauge,
    DistanceGauge,
    Gauge,
    PiecewiseConstantGauge,
    refinement_gauge,
)
from domain.intervals import IntervalSet
from domain.partitions import (
    MAX_DYADIC_DEPTH,
    Cell,
    TaggedPartition,
    generate_birkhoff_partition,
    generate_mcshane_partition,
    is_fine,
    sample_tags,
)

__all__ = [
    "MAX_DYADIC_DEPTH",
    "CallableGauge",
    "Cell",
    "ConstantGauge",
    "DistanceGauge",
    "Gauge",
    "IntervalSet",
    "PiecewiseConstantGauge",
    "TaggedPartition",
    "generate_birkhoff_partition",
    "generate_mcshane_partition",
    "is_fine",
    "refinement_gauge",
    "sample_tags",
]
