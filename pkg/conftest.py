"""Shared fixtures for the hypergeom test suite."""

from pathlib import Path

import pytest

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture
def fl2_idata_path() -> Path:
    return DATA_DIR / "idata_fl2.json"
