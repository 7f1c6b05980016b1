import os
import sys

import pytest

# Repository root holds the flat modules
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from gf import field_create  # noqa: E402


@pytest.fixture
def gf8():
    return field_create(2, 3)


@pytest.fixture
def gf16():
    return field_create(2, 4)


@pytest.fixture
def gf9():
    return field_create(3, 2)


@pytest.fixture
def gf27():
    return field_create(3, 3)
