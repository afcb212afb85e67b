import atexit
import datetime as dt
import json
import logging
import sys
from logging import config
from pathlib import Path
from typing import Any

if sys.version_info >= (3, 12):
    from typing import override
else:
    from typing_extensions import override

# ==========================================================================================
# ==========================================================================================

# File:    custom_logger.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains the JSON log formatter, the log filters and the function
#          that configures logging for a keplerwave session
# ==========================================================================================
# ==========================================================================================
# Insert Code here

LOG_RECORD_BUILTIN_ATTRS = frozenset(
    {
        "args",
        "asctime",
        "created",
        "exc_info",
        "exc_text",
        "filename",
        "funcName",
        "levelname",
        "levelno",
        "lineno",
        "module",
        "msecs",
        "message",
        "msg",
        "name",
        "pathname",
        "process",
        "processName",
        "relativeCreated",
        "stack_info",
        "thread",
        "threadName",
        "taskName",
    }
)

DEFAULT_FMT_KEYS = {"level": "levelname", "logger": "name", "message": "message"}


# ==========================================================================================
# ==========================================================================================


class KeplerJSONFormatter(logging.Formatter):
    """
    Formats each log record as a single JSON object, one object per line.

    Solver and expansion code attach their numbers through ``extra={...}``; those
    attributes are copied into the object next to the configured record fields so a
    run can be audited from the ``.jsonl`` file alone.

    :param fmt_keys: Mapping of output key to ``LogRecord`` attribute name
    """

    def __init__(self, *, fmt_keys: dict[str, str] | None = None):
        super().__init__()
        self.fmt_keys = dict(fmt_keys) if fmt_keys is not None else dict(DEFAULT_FMT_KEYS)

    # ------------------------------------------------------------------------------------------

    @override
    def format(self, record: logging.LogRecord) -> str:
        return json.dumps(self._prepare_log_dict(record), default=str)

    # ------------------------------------------------------------------------------------------

    def _prepare_log_dict(self, record: logging.LogRecord) -> dict[str, Any]:
        always_fields: dict[str, Any] = {
            "message": record.getMessage(),
            "timestamp": dt.datetime.fromtimestamp(
                record.created, tz=dt.timezone.utc
            ).isoformat(),
        }
        if record.exc_info is not None:
            always_fields["exc_info"] = self.formatException(record.exc_info)
        if record.stack_info is not None:
            always_fields["stack_info"] = self.formatStack(record.stack_info)

        message = {
            key: (
                msg_val
                if (msg_val := always_fields.pop(val, None)) is not None
                else getattr(record, val)
            )
            for key, val in self.fmt_keys.items()
        }
        message.update(always_fields)

        for key, val in record.__dict__.items():
            if key not in LOG_RECORD_BUILTIN_ATTRS:
                message[key] = val
        return message


# ==========================================================================================
# ==========================================================================================


class NonErrorFilter(logging.Filter):
    """Passes only records at INFO level or below"""

    @override
    def filter(self, record: logging.LogRecord) -> bool | logging.LogRecord:
        return record.levelno <= logging.INFO


# ==========================================================================================
# ==========================================================================================


def setup_logging(config_path: str | Path, log_dir: str | Path | None = None) -> bool:
    """
    Configure logging from a ``dictConfig`` JSON document.

    File handlers with a relative ``filename`` are re-rooted under ``log_dir`` so the
    same document works from any working directory. The queue handler listener, if
    configured, is started and stopped at interpreter exit.

    Args:
        config_path: Path to the JSON logging configuration
        log_dir: Directory that receives the log files, created if missing

    Returns:
        True if the configuration was applied, False if the basic fallback was used
    """
    try:
        path = Path(config_path)
        if not path.exists():
            raise FileNotFoundError(f"Logging config file not found: {path}")
        with path.open() as f_in:
            nconfig = json.load(f_in)

        if log_dir is not None:
            root = Path(log_dir)
            for handler in nconfig.get("handlers", {}).values():
                filename = handler.get("filename")
                if filename and not Path(filename).is_absolute():
                    handler["filename"] = str(root / Path(filename).name)
            root.mkdir(parents=True, exist_ok=True)
        else:
            for handler in nconfig.get("handlers", {}).values():
                if handler.get("filename"):
                    Path(handler["filename"]).parent.mkdir(parents=True, exist_ok=True)

        config.dictConfig(nconfig)

        queue_handler = logging.getHandlerByName("queue_handler")
        listener = getattr(queue_handler, "listener", None)
        if listener is not None:
            listener.start()
            atexit.register(listener.stop)
        return True

    except Exception as e:
        sys.stderr.write(f"Logging setup failed: {e}\n")
        logging.basicConfig(level=logging.INFO)
        return False


# ==========================================================================================
# ==========================================================================================
# eof
