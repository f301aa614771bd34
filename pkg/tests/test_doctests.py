import doctest
import importlib

import pytest

MODULES = ["lcsq.ncalg", "lcsq.intlat", "lcsq.series", "lcsq.oracle", "lcsq.records", "lcsq.verify"]


@pytest.mark.parametrize("name", MODULES)
def test_module_doctests(name):
    result = doctest.testmod(importlib.import_module(name))
    assert result.failed == 0
