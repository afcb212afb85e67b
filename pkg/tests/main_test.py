import json
import logging
from importlib import resources

import pytest

from keplerwave.custom_logger import setup_logging
from keplerwave.main import default_log_config, main

# ==========================================================================================
# ==========================================================================================
# File:    main_test.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: Tests for the command line entry point
# Instruction: This code can be run in the following ways
#              pytest tests/main_test.py -v
# ==========================================================================================
# ==========================================================================================
# TEST FIXTURES


@pytest.fixture
def quiet_logging(tmp_path, monkeypatch):
    """A console-only logging document, with the working directory moved to tmp_path"""
    document = {
        "version": 1,
        "disable_existing_loggers": False,
        "handlers": {"console": {"class": "logging.StreamHandler", "level": "WARNING"}},
        "loggers": {"root": {"level": "INFO", "handlers": ["console"]}},
    }
    path = tmp_path / "logging.json"
    path.write_text(json.dumps(document), encoding="utf-8")
    monkeypatch.chdir(tmp_path)
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield path
    for handler in list(root.handlers):
        if handler not in handlers:
            root.removeHandler(handler)
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)


# ==========================================================================================
# ==========================================================================================
# TEST CODE


def test_main_success(quiet_logging, tmp_path):
    """Test a successful run returns zero and writes its artifact"""
    out = tmp_path / "out"
    status = main(["css-profile", "--out", str(out), "--n-phi", "16"], quiet_logging)
    assert status == 0
    assert (out / "css-profile.csv").exists()


# ------------------------------------------------------------------------------------------


def test_main_bad_arguments(quiet_logging, capsys):
    """Test an unknown scenario returns the configuration status"""
    assert main(["orbit"], quiet_logging) == 1
    assert "keplerwave: error=CONFIG" in capsys.readouterr().err


# ------------------------------------------------------------------------------------------


def test_main_domain_status(quiet_logging, tmp_path):
    """Test an l_bar above n_bar - 1 maps to the configuration status"""
    args = ["build", "--n-bar", "45", "--l-bar", "50", "--dl", "2.5"]
    args += ["--out", str(tmp_path)]
    assert main(args, quiet_logging) == 1


# ------------------------------------------------------------------------------------------


def test_packaged_log_config_is_loadable(quiet_logging, tmp_path):
    """Test the logging document ships inside the package and configures logging"""
    resource = default_log_config()
    assert resource.is_file()
    document = json.loads(resource.read_text(encoding="utf-8"))
    assert document["version"] == 1
    assert "file_json" in document["handlers"]
    with resources.as_file(resource) as path:
        assert setup_logging(path, tmp_path / "log") is True
    assert (tmp_path / "log").is_dir()


# ==========================================================================================
# ==========================================================================================
# eof
