"""Shared fixtures: precision reset and the two standard parameter sets."""
from __future__ import annotations

import pytest

from legasym import numerics, tpgeom


@pytest.fixture(autouse=True)
def _default_precision():
    """Pin the global precision to the default before and after every test."""
    numerics.set_digits(numerics.DEFAULT_DIGITS)
    yield
    numerics.set_digits(numerics.DEFAULT_DIGITS)


@pytest.fixture(scope="session")
def p05():
    return tpgeom.params_from_nu_a(50, "0.5")


@pytest.fixture(scope="session")
def p01():
    return tpgeom.params_from_nu_a(50, "0.1")
