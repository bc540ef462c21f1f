from oracle.fixtures import (
    FIXTURE_ENTRIES,
    FixtureEntry,
    FixtureFile,
    check_fixtures,
    load_fixture,
    write_fixtures,
)
from oracle.reference import (
    OracleResult,
    dense_distance,
    oracle_distance,
    oracle_integral,
    support_distance,
)

__all__ = [
    "FIXTURE_ENTRIES",
    "FixtureEntry",
    "FixtureFile",
    "OracleResult",
    "check_fixtures",
    "dense_distance",
    "load_fixture",
    "oracle_distance",
    "oracle_integral",
    "support_distance",
    "write_fixtures",
]
