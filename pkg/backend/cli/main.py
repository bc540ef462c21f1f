"""setint command-line entry point.

  setint integrate --scenario seg.json --out reports/
  setint compare --scenario disk.json --threads 4
  setint convergence --scenario seg.json --format both
  setint selftest --out reports/
  setint regen-fixtures [--check] [--out DIR]

Exit codes: 0 ok, 1 invalid input, 2 no convergence (reports still written),
3 an equivalence check was violated.
"""

import argparse
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

# Load .env FIRST, before any local imports that transitively import
# shared.config (which creates Settings() at module level).
load_dotenv()

from cli.commands import (
    ExitCode,
    run_compare,
    run_convergence,
    run_integrate,
    run_regen_fixtures,
    run_selftest,
)
from cli.scenario import load_scenario
from shared.config import settings
from shared.enums import ReportFormat
from shared.errors import ScenarioError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="setint",
        description="Multivalued McShane, Birkhoff, Pettis and Aumann integrals on [0, 1].",
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, help="Directory for report files.")
    common.add_argument(
        "--threads",
        type=int,
        default=settings.threads,
        help="Worker threads; results do not depend on it.",
    )

    scenario = argparse.ArgumentParser(add_help=False)
    scenario.add_argument("--scenario", type=Path, required=True, help="Scenario JSON file.")
    scenario.add_argument(
        "--format",
        choices=[f.value for f in ReportFormat],
        help="Override the scenario's report format.",
    )

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("integrate", parents=[common, scenario], help="Run each listed integrator.")
    sub.add_parser("compare", parents=[common, scenario], help="Pairwise equivalence checks.")
    sub.add_parser("convergence", parents=[common, scenario], help="Per-level CSV sweep.")
    sub.add_parser("selftest", parents=[common], help="Built-in comparison against the oracle.")
    regen = sub.add_parser("regen-fixtures", parents=[common], help="Write oracle fixtures.")
    regen.add_argument("--check", action="store_true", help="Verify instead of writing.")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=settings.log_level,
        format="[%(asctime)s: %(levelname)s/%(processName)s] %(name)s - %(message)s",
        stream=sys.stderr,
    )
    if args.threads < 1:
        print(f"--threads must be at least 1, got {args.threads}", file=sys.stderr)
        return ExitCode.INVALID_INPUT

    if args.command == "selftest":
        return run_selftest(args.out or Path("."), args.threads)
    if args.command == "regen-fixtures":
        return run_regen_fixtures(args.out, args.check, args.threads)

    try:
        scenario = load_scenario(args.scenario)
    except ScenarioError as e:
        print(f"invalid scenario: {e}", file=sys.stderr)
        return ExitCode.INVALID_INPUT
    out = args.out or Path(".")
    fmt = ReportFormat(args.format) if args.format else None
    logger.info("%s %s (scenario %s)", args.command, args.scenario, scenario.scenario_hash[:12])
    if args.command == "integrate":
        return run_integrate(scenario, out, args.threads, fmt)
    if args.command == "compare":
        return run_compare(scenario, out, args.threads)
    return run_convergence(scenario, out, args.threads, fmt)


if __name__ == "__main__":
    raise SystemExit(main())
