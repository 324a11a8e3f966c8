"""Shared fixtures for the workbench tests."""

import pytest

from rtw.extremal import Budget
from rtw.utils import load_config


@pytest.fixture
def budget():
    return Budget(max_nodes=10**7, max_seconds=300)


@pytest.fixture
def config():
    return load_config()
