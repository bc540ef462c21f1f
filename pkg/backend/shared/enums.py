from enum import StrEnum


class Method(StrEnum):
    MCSHANE = "mcshane"
    BIRKHOFF = "birkhoff"
    PETTIS = "pettis"
    AUMANN = "aumann"


class PartitionKind(StrEnum):
    MCSHANE = "mcshane"
    BIRKHOFF = "birkhoff"


class Tagging(StrEnum):
    """How generate_mcshane_partition places tags."""

    RANDOM = "random"
    MIDPOINT = "midpoint"


class SelectionKind(StrEnum):
    STEINER = "steiner"
    SUPPORT_DIRECTION = "support_direction"
    CONVEX_MIX = "convex_mix"
    POINT = "point"


class OracleSupport(StrEnum):
    """What the reference integrator may rely on for a multifunction."""

    ANALYTIC = "analytic"
    PIECEWISE_LINEAR = "piecewise_linear"
    NONE = "none"


class ReportFormat(StrEnum):
    JSON = "json"
    CSV = "csv"
    BOTH = "both"
