"""
Command line entry point.

    impact-twist validate config.json
    impact-twist run config.json --out results --jobs 4 --seed 7
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from typing import Optional, Sequence

from ..exceptions import ConfigParseError, ImpactTwistError
from .artifacts import ArtifactWriter, package_versions
from .config import load_config
from .experiments import EXPERIMENTS
from .validation import collect_violations, validate

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_INVALID = 2

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="impact-twist",
        description="Numerical experiments on a periodically forced impact oscillator.",
    )
    parser.add_argument(
        "-v", "--verbose", action="count", default=0, help="-v for INFO, -vv for DEBUG logs."
    )
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="Run the experiment named in a configuration file.")
    run.add_argument("config", help="Path to the JSON configuration.")
    run.add_argument(
        "--out", default=None, help="Output directory, overrides output.directory."
    )
    run.add_argument(
        "--jobs",
        type=int,
        default=os.cpu_count() or 1,
        help="Worker processes (default: number of CPUs).",
    )
    run.add_argument("--seed", type=int, default=None, help="Seed for sampled initial states.")

    check = commands.add_parser("validate", help="List every violation of a configuration.")
    check.add_argument("config", help="Path to the JSON configuration.")
    return parser


def _configure_logging(verbosity: int) -> None:
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr)


def run_validate(path: str) -> int:
    report = validate(path)
    if report.ok:
        print(f"{path}: OK")
        return EXIT_OK
    for violation in report.violations:
        print(f"{path}: {violation}")
    return EXIT_INVALID


def run_experiment(
    path: str, out: Optional[str] = None, jobs: int = 1, seed: Optional[int] = None
) -> int:
    """
    Load, check and run one configuration, then write its manifest.

    :return: EXIT_OK, EXIT_INVALID for a rejected configuration or EXIT_FAILURE when the
        experiment itself fails
    """
    try:
        config = load_config(path).with_overrides(out=out, seed=seed)
    except ConfigParseError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVALID

    violations = collect_violations(config)
    if violations:
        for violation in violations:
            print(f"{path}: {violation}", file=sys.stderr)
        return EXIT_INVALID

    name = config.experiment.name
    writer = ArtifactWriter(config.output.directory, config.output.formats)
    logger.info("Running %s from %s with %d job(s)", name, path, jobs)
    start = time.perf_counter()
    try:
        summary = EXPERIMENTS[name](config, writer, max(1, jobs))
    except ImpactTwistError as exc:
        logger.error("Experiment %s failed: %s", name, exc)
        print(f"{name} failed: {exc}", file=sys.stderr)
        return EXIT_FAILURE
    elapsed = time.perf_counter() - start

    manifest = writer.write_manifest(
        {
            "experiment": name,
            "config": config.model_dump(mode="json"),
            "versions": package_versions(),
            "jobs": jobs,
            "wall_time_seconds": elapsed,
            "summary": summary,
        }
    )
    logger.info("Finished %s in %.2f s, manifest at %s", name, elapsed, manifest)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if args.command == "validate":
        return run_validate(args.config)
    return run_experiment(args.config, out=args.out, jobs=args.jobs, seed=args.seed)


if __name__ == "__main__":
    sys.exit(main())
