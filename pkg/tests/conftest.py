"""Root test configuration."""

import os


def pytest_configure(config):
    """Drop every SETINT_* override from the environment.

    ``shared.config.settings`` is built once at import time, so this must run
    before any test module imports it. Tolerance and oracle defaults in tests
    are the documented ones no matter what the developer's shell exports; a
    root ``.env`` is only read by the CLI entrypoint.
    """
    for key in [k for k in os.environ if k.startswith("SETINT_")]:
        del os.environ[key]
