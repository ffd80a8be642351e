"""
hypergeom - Euler Data and Mirror Transform Verification for Fl(n)
Command-Line Entry Point

Parses arguments into a validated RunConfig, dispatches to the subcommand
handler and writes the report. Exit status: 0 when every case passes, 1 on a
check failure, 2 on a configuration or input error.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from pydantic import ValidationError

from hypergeom import config
from hypergeom.commands import MODULES
from hypergeom.exceptions import HypergeomError
from hypergeom.logging_setup import configure_logging
from hypergeom.models import ErrorReport, Report, RunConfig

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

HANDLERS: Dict[str, Callable[[RunConfig], Report]] = {}
for _module in MODULES:
    HANDLERS.update(_module.HANDLERS)


def parse_degree(text: str) -> Union[int, List[int]]:
    """"2" is a scalar bound, "1,2" an explicit multidegree."""
    try:
        if "," in text:
            return [int(part) for part in text.split(",")]
        return int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a comma list, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=2, help="Size of Fl(n)")
    common.add_argument("--max-degree", type=parse_degree, default=config.DEFAULT_MAX_DEGREE,
                        help="Degree bound: scalar or comma list of n-1 entries")
    common.add_argument("--delta-max", type=int, default=config.DEFAULT_DELTA_MAX)
    common.add_argument("--zeta-order", type=int, default=config.DEFAULT_ZETA_ORDER)
    common.add_argument("--jobs", type=int, default=None,
                        help=f"Worker processes (fallback: ${config.JOBS_ENV_VAR}, then CPU count)")
    common.add_argument("--idata", type=Path, default=None, help="I-data JSON file")
    common.add_argument("--report", type=Path, default=None, help="Write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--source", choices=["idata", "synthetic"], default="idata")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--log-level", default=config.LOG_LEVEL)
    common.add_argument("--log-json", action="store_true", default=config.LOG_JSON)

    parser = argparse.ArgumentParser(
        prog="hypergeom",
        description="Exact verification of Euler data, linking and the mirror transform for Fl(n)",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in MODULES:
        module.register(subparsers, [common])
    return parser


def build_run_config(args: argparse.Namespace) -> RunConfig:
    """
    Raises:
        ValidationError: If a value violates the RunConfig constraints,
            including a malformed $HYPERGEOM_JOBS
    """
    jobs = args.jobs
    if jobs is None:
        jobs = os.getenv(config.JOBS_ENV_VAR, "").strip() or config.DEFAULT_JOBS
    return RunConfig(
        command=args.command,
        n=args.n,
        max_degree=args.max_degree,
        delta_max=args.delta_max,
        zeta_order=args.zeta_order,
        jobs=jobs,
        idata_path=args.idata,
        report_path=args.report,
        format=args.format,
        source=args.source,
        seed=args.seed,
    )


def render_report(report: Report, fmt: str) -> str:
    if fmt == "json":
        return report.model_dump_json(indent=2) + "\n"
    lines = [report.summary()]
    for case in getattr(report, "cases", []):
        if case.status.value != "pass":
            lines.append(f"  {case.status.value}: {case.model_dump_json(exclude_none=True)}")
    error = getattr(report, "error", None)
    if error:
        lines.append(f"  error: {error}")
    return "\n".join(lines) + "\n"


def write_report(report: Report, fmt: str, path: Optional[Path]) -> None:
    """
    Raises:
        OSError: If the report file cannot be written
    """
    text = render_report(report, fmt)
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Report written to {path}")


def _input_error(command: str, n: int, error: Exception, fmt: str, path: Optional[Path]) -> int:
    """Write an ErrorReport for a run that could not start or finish; always exit 2."""
    report = ErrorReport(check=command, n=n, error=str(error))
    try:
        write_report(report, fmt, path)
    except OSError as e:
        logger.error(f"Could not write the error report: {e}")
    return EXIT_INPUT_ERROR


def run(run_config: RunConfig) -> int:
    """
    Execute one subcommand and write its report.

    Returns:
        int: Exit status
    """
    handler = HANDLERS[run_config.command]
    logger.info(f"Running {run_config.command} for n={run_config.n} with {run_config.jobs} jobs")
    try:
        report = handler(run_config)
    except (HypergeomError, ValueError, OSError) as e:
        logger.error(f"{run_config.command} failed on its input: {e}")
        return _input_error(run_config.command, run_config.n, e, run_config.format, run_config.report_path)
    try:
        write_report(report, run_config.format, run_config.report_path)
    except OSError as e:
        logger.error(f"Could not write the report: {e}")
        return EXIT_INPUT_ERROR
    return EXIT_OK if report.passed else EXIT_CHECK_FAILED


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.log_level, args.log_json)
    try:
        run_config = build_run_config(args)
    except ValidationError as e:
        logger.error(f"Invalid configuration: {e}")
        return _input_error(args.command, args.n, e, args.format, args.report)
    return run(run_config)


if __name__ == "__main__":
    sys.exit(main())
