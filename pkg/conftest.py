import pytest

# ==========================================================================================
# ==========================================================================================

# File:    conftest.py
# Date:    October 17, 2026
# Author:  keplerwave developers
# Purpose: This file contains pytest fixtures and mark information
# ==========================================================================================
# ==========================================================================================
# Insert Code here


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--run-slow", action="store_true", default=False, help="run fine-grid tests"
    )


# ------------------------------------------------------------------------------------------


def pytest_collection_modifyitems(
    config: pytest.Config, items: list[pytest.Item]
) -> None:
    if config.getoption("--run-slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


# ==========================================================================================
# ==========================================================================================
# eof
