import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from algas3 import fru  # noqa: E402


@pytest.fixture(scope="session")
def table():
    return fru.default_table()


@pytest.fixture(scope="session")
def rulebase(table):
    return table.rulebase
