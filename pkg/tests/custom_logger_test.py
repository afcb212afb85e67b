import json
import logging
import sys

import pytest

from keplerwave.custom_logger import KeplerJSONFormatter, NonErrorFilter, setup_logging

# ==========================================================================================
# ==========================================================================================
# File:    custom_logger_test.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: Tests for the JSON formatter, the stdout filter and the logging setup
# Instruction: This code can be run in the following ways
#              pytest tests/custom_logger_test.py -v
# ==========================================================================================
# ==========================================================================================
# TEST FIXTURES


@pytest.fixture
def restore_root_logger():
    """Put the root logger handlers and level back after a test reconfigures them"""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield root
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)


# ------------------------------------------------------------------------------------------


@pytest.fixture
def file_config(tmp_path):
    """A dictConfig document with one JSON file handler under a relative path"""
    document = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {"json": {"()": "keplerwave.custom_logger.KeplerJSONFormatter"}},
        "handlers": {
            "file_json": {
                "class": "logging.FileHandler",
                "level": "DEBUG",
                "formatter": "json",
                "filename": "nested/run.log.jsonl",
            }
        },
        "loggers": {"root": {"level": "DEBUG", "handlers": ["file_json"]}},
    }
    path = tmp_path / "logging.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    return path


# ------------------------------------------------------------------------------------------


def _record(level=logging.INFO, msg="expansion window", exc_info=None):
    return logging.LogRecord(
        name="keplerwave.spectral",
        level=level,
        pathname=__file__,
        lineno=42,
        msg=msg,
        args=(),
        exc_info=exc_info,
    )


# ==========================================================================================
# ==========================================================================================
# TEST CODE


def test_formatter_copies_extras():
    """Test extra attributes land next to the configured keys"""
    record = _record()
    record.n_lo = 12
    record.tail_mass = 3.5e-7
    data = json.loads(KeplerJSONFormatter().format(record))
    assert data["message"] == "expansion window"
    assert data["level"] == "INFO"
    assert data["logger"] == "keplerwave.spectral"
    assert data["n_lo"] == 12
    assert data["tail_mass"] == 3.5e-7
    assert "timestamp" in data
    assert "msg" not in data


# ------------------------------------------------------------------------------------------


def test_formatter_custom_keys_and_exceptions():
    """Test configured keys and the exception text"""
    try:
        raise ValueError("no sign change")
    except ValueError:
        record = _record(logging.ERROR, "solver failed", exc_info=sys.exc_info())
    formatter = KeplerJSONFormatter(fmt_keys={"lvl": "levelname", "line": "lineno"})
    data = json.loads(formatter.format(record))
    assert data["lvl"] == "ERROR"
    assert data["line"] == 42
    assert data["message"] == "solver failed"
    assert "ValueError: no sign change" in data["exc_info"]


# ------------------------------------------------------------------------------------------


def test_non_error_filter():
    """Test warnings and errors are held back from stdout"""
    flt = NonErrorFilter()
    assert flt.filter(_record(logging.DEBUG))
    assert flt.filter(_record(logging.INFO))
    assert not flt.filter(_record(logging.WARNING))
    assert not flt.filter(_record(logging.ERROR))


# ------------------------------------------------------------------------------------------


def test_setup_logging_reroots_files(file_config, tmp_path, restore_root_logger):
    """Test relative log files move under log_dir and receive JSON lines"""
    log_dir = tmp_path / "logs"
    assert setup_logging(file_config, log_dir) is True
    logging.getLogger("keplerwave.test").info("hello", extra={"alpha": 57.4})
    for handler in restore_root_logger.handlers:
        handler.flush()
    lines = (log_dir / "run.log.jsonl").read_text(encoding="utf-8").splitlines()
    entry = json.loads(lines[-1])
    assert entry["message"] == "hello"
    assert entry["alpha"] == 57.4


# ------------------------------------------------------------------------------------------


def test_setup_logging_missing_file(tmp_path, capsys, restore_root_logger):
    """Test a missing document falls back to basic logging"""
    assert setup_logging(tmp_path / "absent.json") is False
    assert "Logging setup failed" in capsys.readouterr().err


# ==========================================================================================
# ==========================================================================================
# eof
