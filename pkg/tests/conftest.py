# conftest.py
from pathlib import Path

import pytest

from services.finite_field import gf_construct
from services.linear_algebra import RationalMatrix

FILES_DIR = Path(__file__).resolve().parent.parent / "files"


@pytest.fixture
def files_dir() -> Path:
    return FILES_DIR


@pytest.fixture
def gf2():
    return gf_construct(2, 1)


@pytest.fixture
def gf3():
    return gf_construct(3, 1)


@pytest.fixture
def gf8():
    return gf_construct(2, 3)


@pytest.fixture
def gf9():
    return gf_construct(3, 2)


@pytest.fixture
def u24_matrix() -> RationalMatrix:
    """A rational realization of U_{2,4}."""
    return RationalMatrix.from_rows([[1, 0, 1, 1], [0, 1, 1, 2]])
