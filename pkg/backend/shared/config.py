"""Centralized configuration for setint.

All environment variables are read once at import time via Pydantic Settings.
Modules import ``settings`` from this module instead of calling os.getenv().

Environment variables are loaded from .env by the CLI entrypoint (cli/main.py)
before this module is first imported.
"""

from pathlib import Path

from pydantic import AliasChoices, Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Embedded in every report and oracle fixture.
LIBRARY_VERSION = "0.1.0"

_REPO_ROOT = Path(__file__).resolve().parents[2]


class ToleranceDefaults(BaseSettings):
    """Default run tolerances used when a caller does not pass its own.

    Env vars: SETINT_TOL_EPSILON_TARGET, SETINT_TOL_MAX_DEPTH, SETINT_TOL_TAG_SAMPLES,
    SETINT_TOL_DIRECTIONS, SETINT_TOL_LEAK, SETINT_TOL_SEED
    """

    model_config = SettingsConfigDict(env_prefix="SETINT_TOL_")

    epsilon_target: float = 1e-3
    max_depth: int = 14
    tag_samples: int = 32
    directions: int = 256
    leak: float = 0.0
    seed: int = 0


class OracleDefaults(BaseSettings):
    """Resolution of the reference quadrature.

    Env vars: SETINT_ORACLE_DIRECTIONS, SETINT_ORACLE_PANELS, SETINT_ORACLE_ORDER
    """

    model_config = SettingsConfigDict(env_prefix="SETINT_ORACLE_")

    # Must stay a multiple of every integrator grid it is compared against.
    directions: int = 4096
    panels: int = 64
    order: int = 10


class Settings(BaseSettings):
    """Root settings for setint.

    Nested settings (tolerances, oracle) each read from their own prefixed env
    vars. Top-level fields read from ``SETINT_``-prefixed env vars.
    """

    model_config = SettingsConfigDict(env_prefix="SETINT_")

    log_level: str = "INFO"
    threads: int = 1

    # Oracle fixture directory; SETINT_FIXTURES is the documented override.
    fixtures_dir: Path = Field(
        _REPO_ROOT / "tests" / "fixtures" / "oracle",
        validation_alias=AliasChoices("SETINT_FIXTURES", "SETINT_FIXTURES_DIR"),
    )

    tolerances: ToleranceDefaults = ToleranceDefaults()
    oracle: OracleDefaults = OracleDefaults()


settings = Settings()
