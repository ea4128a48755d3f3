import random

import pytest

from qforge.algebra.multipoly import MultiPoly
from qforge.config import get_settings
from qforge.services.identities import build_registry, get_registry


@pytest.fixture()
def registry():
    return build_registry(max_order=16)


@pytest.fixture()
def settings_env(monkeypatch):
    def apply(**values):
        for name, value in values.items():
            monkeypatch.setenv(f"QFORGE_{name.upper()}", str(value))
        get_settings.cache_clear()
        get_registry.cache_clear()
        return get_settings()

    yield apply
    get_settings.cache_clear()
    get_registry.cache_clear()


@pytest.fixture()
def xyz():
    return MultiPoly.var("x"), MultiPoly.var("y"), MultiPoly.var("z")


@pytest.fixture()
def rng():
    return random.Random(20240611)
