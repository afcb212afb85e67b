import logging
import sys
from collections.abc import Sequence
from importlib import resources
from pathlib import Path

if sys.version_info >= (3, 11):
    from importlib.resources.abc import Traversable
else:
    from importlib.abc import Traversable

from keplerwave.cli import ExitStatus, parse_args, report_failure, run
from keplerwave.custom_logger import setup_logging
from keplerwave.errors import ConfigError

# ==========================================================================================
# ==========================================================================================

# File:    main.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the entry point that configures logging, resolves the run
#          configuration and hands it to the scenario runner
# ==========================================================================================
# ==========================================================================================
# Insert Code here

LOG_CONFIG_RESOURCE = ("data", "log_handlers.json")


def default_log_config() -> Traversable:
    """The logging dictConfig document shipped inside the keplerwave package"""
    return resources.files("keplerwave").joinpath(*LOG_CONFIG_RESOURCE)


# ------------------------------------------------------------------------------------------


def main(argv: Sequence[str] | None = None, log_config: str | Path | None = None) -> int:
    """
    Run the keplerwave command line.

    Args:
        argv: Arguments without the program name, sys.argv[1:] when None
        log_config: Logging dictConfig JSON, the packaged data/log_handlers.json by
            default

    Returns:
        The process exit status
    """
    if log_config is None:
        with resources.as_file(default_log_config()) as path:
            setup_logging(path, "log")
    else:
        setup_logging(log_config, "log")
    logger = logging.getLogger(__name__)
    logger.info("Starting keplerwave session")

    try:
        config = parse_args(argv)
    except ConfigError as e:
        logger.error("Invalid configuration", extra={"reason": str(e)})
        report_failure(ExitStatus.CONFIG, str(e))
        return int(ExitStatus.CONFIG)

    result = run(config)
    logger.info(
        "Closed keplerwave session",
        extra={"status": result.data.name, "artifacts": list(result.artifacts)},
    )
    return int(result.data)


# ------------------------------------------------------------------------------------------


def main_cli() -> None:
    """Console script hook"""
    sys.exit(main())


# ==========================================================================================
# ==========================================================================================
# eof
