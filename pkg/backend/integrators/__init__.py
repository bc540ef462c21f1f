from integrators.aumann import aumann_integrate
from integrators.birkhoff import birkhoff_integrate, birkhoff_level
from integrators.compare import ComparisonReport, PairCheck, check_pairs, compare_all
from integrators.mcshane import mcshane_integrate, mcshane_level
from integrators.pettis import pettis_integrate
from integrators.results import IntegralResult, LevelOutcome, Tolerances, TracePoint
from integrators.single_valued import SingleValuedResult, single_valued_integrate

__all__ = [
    "ComparisonReport",
    "IntegralResult",
    "LevelOutcome",
    "PairCheck",
    "SingleValuedResult",
    "Tolerances",
    "TracePoint",
    "aumann_integrate",
    "birkhoff_integrate",
    "birkhoff_level",
    "check_pairs",
    "compare_all",
    "mcshane_integrate",
    "mcshane_level",
    "pettis_integrate",
    "single_valued_integrate",
]
