"""Generate or verify the committed oracle fixtures.

  uv run python scripts/regen_fixtures.py            # write tests/fixtures/oracle/*.json
  uv run python scripts/regen_fixtures.py --check    # exit 1 if any fixture drifts
  uv run python scripts/regen_fixtures.py <dir>      # use a custom directory

Same as `setint regen-fixtures [--check] [--out DIR]`, usable without
installing the package.
"""

import logging
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "backend"))

from cli.commands import run_regen_fixtures  # noqa: E402

FIXTURES = ROOT / "tests" / "fixtures" / "oracle"


def main(argv: list[str]) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(message)s")
    positional = [a for a in argv if not a.startswith("-")]
    directory = Path(positional[0]) if positional else FIXTURES
    return int(run_regen_fixtures(directory, check="--check" in argv))


if __name__ == "__main__":
    raise SystemExit(main(sys.argv[1:]))
