"""Environment-driven settings (shared.config)."""

import os
from pathlib import Path

from shared.config import OracleDefaults, Settings, ToleranceDefaults, settings


def test_documented_defaults():
    tol = ToleranceDefaults()
    assert tol.epsilon_target == 1e-3
    assert tol.max_depth == 14
    assert tol.directions == 256
    assert tol.seed == 0
    oracle = OracleDefaults()
    assert (oracle.directions, oracle.panels, oracle.order) == (4096, 64, 10)


def test_tolerance_prefix(monkeypatch):
    monkeypatch.setenv("SETINT_TOL_EPSILON_TARGET", "1e-5")
    monkeypatch.setenv("SETINT_TOL_SEED", "7")
    tol = ToleranceDefaults()
    assert tol.epsilon_target == 1e-5
    assert tol.seed == 7


def test_oracle_prefix(monkeypatch):
    monkeypatch.setenv("SETINT_ORACLE_DIRECTIONS", "8192")
    assert OracleDefaults().directions == 8192


def test_fixture_directory_override(monkeypatch, tmp_path):
    monkeypatch.setenv("SETINT_FIXTURES", str(tmp_path))
    monkeypatch.setenv("SETINT_THREADS", "4")
    s = Settings()
    assert s.fixtures_dir == tmp_path
    assert s.threads == 4


def test_fixture_directory_defaults_to_the_committed_fixtures():
    assert Settings().fixtures_dir == Path(__file__).resolve().parents[1] / "fixtures" / "oracle"


def test_suite_runs_without_setint_overrides():
    assert not [k for k in os.environ if k.startswith("SETINT_")]
    assert settings.tolerances == ToleranceDefaults()
    assert settings.oracle == OracleDefaults()
