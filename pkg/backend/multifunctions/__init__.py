from multifunctions.base import (
    Multifunction,
    scale_multifunction,
    sum_multifunctions,
    verify,
)
from multifunctions.catalog import CATALOG_NAMES, catalog
from multifunctions.selections import (
    Selection,
    convex_mix_selection,
    membership_gap,
    point_selection,
    point_valued,
    steiner_selection,
    support_selection,
)

__all__ = [
    "CATALOG_NAMES",
    "Multifunction",
    "Selection",
    "catalog",
    "convex_mix_selection",
    "membership_gap",
    "point_selection",
    "point_valued",
    "scale_multifunction",
    "steiner_selection",
    "sum_multifunctions",
    "support_selection",
    "verify",
]
