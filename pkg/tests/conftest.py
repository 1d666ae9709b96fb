import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from cdu.field import Field


@pytest.fixture(scope="session")
def gf8():
    return Field(2, 3)


@pytest.fixture(scope="session")
def gf16():
    return Field(2, 4)


@pytest.fixture(scope="session")
def gf9():
    return Field(3, 2)


@pytest.fixture(scope="session")
def gf27():
    return Field(3, 3)


@pytest.fixture(scope="session")
def gf64():
    return Field(2, 6)
