"""Command-line frontend.

Exit codes: 0 when every check passes, 1 on a failed check or a computation
error, 2 on an invalid configuration.
"""
import argparse
import sys
from typing import List, Optional, Tuple

from bound_key.commands.registry import default_registry
from bound_key.errors import BoundKeyError, ConfigError
from bound_key.reports.report import Report
from bound_key.utils.config import COMMANDS, FACTORIES, FORMATS, RunConfig, build_config, load_env_files
from observability.logger import get_logger

logger = get_logger("CLI")

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bound-key",
        description="Verify bound entangled states with distillable key and simulate the recurrence protocol.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--D", dest="D", type=int, help="shield dimension per side (>= 3)")
    parser.add_argument("--k", dest="k", type=int, help="number of copies")
    parser.add_argument("--k-max", dest="k_max", type=int, help="largest k in a criterion series")
    parser.add_argument("--p1", dest="p1", type=float, help="mixture weight of the correlated pbit")
    parser.add_argument("--seed", dest="seed", type=int)
    parser.add_argument("--tol-psd", dest="tol_psd", type=float)
    parser.add_argument("--tol-herm", dest="tol_herm", type=float)
    parser.add_argument("--out", dest="output_path", help="write the report here instead of stdout")
    parser.add_argument("--format", dest="format", choices=FORMATS)
    parser.add_argument("--factory", dest="factory", choices=FACTORIES, help="export target")
    parser.add_argument("--mem-cap", dest="mem_cap", type=int, help="dense dimension cap (env BOUNDKEY_MEM_CAP)")
    parser.add_argument("--config", dest="config", help="JSON config file; flags take precedence")
    return parser


def _error_report(config: RunConfig, error: Exception) -> Report:
    report = Report(command=config.command, parameters=config.parameters())
    report.data["error"] = f"{type(error).__name__}: {error}"
    report.check("completed", False)
    return report


def run(config: RunConfig) -> Tuple[int, Report]:
    try:
        report = default_registry().execute(config)
    except ConfigError:
        raise
    except BoundKeyError as e:
        logger.error("%s failed: %s", config.command, e)
        return EXIT_FAILED, _error_report(config, e)
    if not report.ok:
        logger.error("%s: failed checks %s", config.command, ", ".join(report.failed))
        return EXIT_FAILED, report
    return EXIT_OK, report


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    load_env_files()
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    try:
        config = build_config(args.command, flags, args.config)
        code, report = run(config)
    except ConfigError as e:
        logger.error("Invalid configuration: %s", e)
        return EXIT_CONFIG

    if config.output_path:
        report.write(config.output_path, config.format)
        logger.info("Report written to %s", config.output_path)
    else:
        sys.stdout.write(report.render(config.format))
    logger.info(report.summary())
    return code


if __name__ == "__main__":
    sys.exit(main())
